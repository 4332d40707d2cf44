"""Reports produced by the command line tool, in human and machine form.

The machine form is a line-oriented key/value stream::

    stratsimp-report version=1
    command=check-fibrant target=example314
    record=verdict path=. outcome=not_equivalent kind=unfilled_stratum_horn n=1
    status=fail

Values containing whitespace or quotes are quoted with :func:`shlex.quote`,
so ``shlex.split`` recovers them.  Output depends only on the inputs.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from fractions import Fraction

from ._util import canon_key, ident

VERSION = 1
PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"
EXIT_CODES = {PASS: 0, FAIL: 1, UNKNOWN: 2}
USAGE_EXIT = 3


def fmt_value(v) -> str:
    """Canonical text for a report value; sets and dicts are sorted."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (set, frozenset)):
        return "{" + ",".join(fmt_value(x) for x in sorted(v, key=canon_key)) + "}"
    if isinstance(v, dict):
        items = sorted(v.items(), key=lambda kv: canon_key(kv[0]))
        return "{" + ",".join(f"{fmt_value(a)}:{fmt_value(b)}" for a, b in items) + "}"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(fmt_value(x) for x in v) + ")"
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return ident(v)


def _quote(s: str) -> str:
    if s and all(c.isalnum() or c in "-_.,:/<>(){}!*+^" for c in s):
        return s
    return shlex.quote(s)


@dataclass
class Report:
    command: str
    args: dict = field(default_factory=dict)
    records: list = field(default_factory=list)  # (record type, fields dict)
    status: str = PASS

    def add(self, rtype: str, **fields) -> None:
        self.records.append((rtype, fields))

    def worsen(self, status: str) -> None:
        """Lower the overall status; failures dominate unknowns."""
        rank = {PASS: 0, UNKNOWN: 1, FAIL: 2}
        if rank[status] > rank[self.status]:
            self.status = status

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def add_verdict(self, verdict, path: str = ".") -> None:
        """Flatten a verdict and its components into records."""
        fields = {"path": path, "outcome": verdict.outcome, "kind": verdict.kind}
        for k in sorted(verdict.details):
            if k in ("path", "outcome", "kind"):
                continue
            fields[k] = verdict.details[k]
        self.add("verdict", **fields)
        for name, sub in verdict.components:
            self.add_verdict(sub, name if path == "." else f"{path}/{name}")

    def add_log(self, name: str, log) -> None:
        """Counts of a realization check log, one record per identity."""
        for key in sorted(log.checked):
            if key.endswith(":failed"):
                continue
            failed = log.checked.get(key + ":failed", 0)
            self.add("identity", group=name, name=key, checked=log.checked[key], failed=failed,
                     status=PASS if failed == 0 else FAIL)
        for fname, detail in log.failures[:5]:
            self.add("failure", group=name, name=fname, at=detail)
        if not log.ok:
            self.worsen(FAIL)


def status_of(verdict) -> str:
    if verdict.equivalent:
        return PASS
    if verdict.refuted:
        return FAIL
    return UNKNOWN


def emit(report: Report, fmt: str = "human") -> str:
    if fmt == "machine":
        return emit_machine(report)
    if fmt == "human":
        return emit_human(report)
    raise ValueError(f"unknown format {fmt!r}")


def _kv(fields: dict) -> str:
    return " ".join(f"{k}={_quote(fmt_value(v))}" for k, v in fields.items())


def emit_machine(report: Report) -> str:
    lines = [f"stratsimp-report version={VERSION}"]
    lines.append(_kv({"command": report.command, **report.args}))
    for rtype, fields in report.records:
        lines.append(_kv({"record": rtype, **fields}))
    lines.append(f"status={report.status}")
    return "\n".join(lines) + "\n"


def emit_human(report: Report) -> str:
    args = " ".join(f"{k}={fmt_value(v)}" for k, v in report.args.items())
    lines = [f"{report.command} {args}".rstrip() + f": {report.status.upper()}"]
    for rtype, fields in report.records:
        if rtype == "verdict":
            depth = 0 if fields["path"] == "." else fields["path"].count("/") + 1
            pad = "  " * (depth + 1)
            name = "" if fields["path"] == "." else fields["path"].rsplit("/", 1)[-1] + ": "
            lines.append(f"{pad}{name}{fields['outcome']} ({fields['kind']})")
            for k, v in fields.items():
                if k not in ("path", "outcome", "kind"):
                    lines.append(f"{pad}  {k}: {fmt_value(v)}")
        else:
            rest = ", ".join(f"{k}={fmt_value(v)}" for k, v in fields.items())
            lines.append(f"  {rtype}: {rest}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> list:
    """Records of a machine report as a list of dicts (header line excluded)."""
    out = []
    lines = text.splitlines()
    if not lines or not lines[0].startswith("stratsimp-report "):
        raise ValueError("not a stratsimp machine report")
    for line in lines[1:]:
        rec = {}
        for tok in shlex.split(line):
            k, _, v = tok.partition("=")
            rec[k] = v
        out.append(rec)
    return out
