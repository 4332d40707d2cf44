"""Command line interface: ``stratsimp <command> [options]``.

Objects are referred to by name.  A name is looked up in the files given
with ``-w``, then as a path to a ``.strat`` file, then among the bundled
fixtures (``example314``, ``spine3.cert``, ...).

Exit codes: 0 all checks passed, 1 a definitive failure, 2 an unknown
outcome, 3 a usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

from ._util import Budget, Undetermined
from .report import FAIL, PASS, UNKNOWN, USAGE_EXIT, Report, emit, status_of
from .textformat import ParseError, Workspace, parse, parse_file, serialize, workspace_of

FIXTURES = "fixtures"


class UsageError(Exception):
    pass


# -- name resolution ---------------------------------------------------------------------

def fixture_names() -> list:
    root = resources.files(__package__) / FIXTURES
    return sorted(p.name for p in root.iterdir() if p.name.endswith((".strat", ".cert")))


def fixture_text(name: str) -> str | None:
    root = resources.files(__package__) / FIXTURES
    for cand in (name, name + ".strat", name + ".cert"):
        p = root / cand
        if p.is_file():
            return p.read_text(encoding="utf-8")
    return None


class Resolver:
    def __init__(self, paths=()):
        self.ws = Workspace()
        for p in paths:
            parse_file(p, into=self.ws)

    def get(self, name: str, kind):
        kinds = (kind,) if isinstance(kind, str) else tuple(kind)
        if name in self.ws:
            return self.ws.get(name, kinds)
        if os.path.isfile(name):
            return _pick(parse_file(name), name, kinds)
        text = fixture_text(name)
        if text is not None:
            return _pick(parse(text, source=name), name, kinds)
        for fx in fixture_names():
            ws = parse(fixture_text(fx), source=fx)
            if name in ws and ws.kind_of(name) in kinds:
                return ws.get(name)
        raise UsageError(f"unknown object or file {name!r}")

    def all_of(self, name: str, kind: str) -> list:
        """Every object of ``kind`` in a file or fixture (or the named one)."""
        if name in self.ws:
            return [(name, self.ws.get(name, kind))]
        if os.path.isfile(name):
            ws = parse_file(name)
        else:
            text = fixture_text(name)
            if text is None:
                raise UsageError(f"unknown object or file {name!r}")
            ws = parse(text, source=name)
        items = [(n, ws.get(n)) for n in ws.names(kind)]
        if not items:
            raise UsageError(f"{name} contains no {kind}")
        return items


def _pick(ws: Workspace, name: str, kinds):
    stem = os.path.basename(name).split(".")[0]
    if stem in ws and ws.kind_of(stem) in kinds:
        return ws.get(stem)
    cands = [n for n in ws.names() if ws.kind_of(n) in kinds]
    if not cands:
        raise UsageError(f"{name} defines no {' or '.join(kinds)}")
    return ws.get(cands[-1])


def _labels(tok: str) -> tuple:
    return tuple(t.strip() for t in tok.split(",") if t.strip())


def _poset_for(res: Resolver, args, labels):
    from .poset import Poset

    if getattr(args, "poset", None):
        return res.get(args.poset, "poset")
    elems = sorted(set(labels))
    return Poset(elems, list(zip(elems, elems[1:])), name="labels")


def _budget(args) -> Budget:
    return Budget(args.budget)


# -- commands ----------------------------------------------------------------------------

def cmd_check_fibrant(res, args) -> Report:
    from .stratified import is_fibrant

    X = res.get(args.target, "strat")
    rep = Report("check-fibrant", {"target": args.target, "max_dim": args.max_dim, "tier": args.tier})
    v = is_fibrant(X, args.max_dim, _budget(args), tier=args.tier)
    rep.add_verdict(v)
    rep.worsen(status_of(v))
    return rep


def cmd_classify_horn(res, args) -> Report:
    from .stratified import classify_horn

    labels = _labels(args.labels)
    n = len(labels) - 1
    if n < 1 or not 0 <= args.k <= n:
        raise UsageError("need at least two labels and 0 <= k <= n")
    P = _poset_for(res, args, labels)
    cls = classify_horn(labels, n, args.k, P)
    rep = Report("classify-horn", {"labels": ",".join(labels), "k": args.k})
    rep.add("horn", n=n, k=args.k, classification=cls)
    return rep


def cmd_gen_set(res, args) -> Report:
    from .stratified import generating_set

    P = res.get(args.poset, "poset")
    G = generating_set(P, args.kind, args.max_n)
    rep = Report("gen-set", {"poset": args.poset, "kind": args.kind, "max_n": args.max_n})
    for g in G.items:
        rep.add("generator", n=g.n, k=g.k, labels=",".join(map(str, g.labels)))
    ok = G.revalidate()
    rep.add("summary", count=len(G.items), revalidated=ok)
    if not ok:
        rep.worsen(FAIL)
    return rep


def cmd_replace(res, args) -> Report:
    from .stratified import fibrant_replace_nv, strata_isomorphic

    X = res.get(args.target, "strat")
    rep = Report("replace", {"target": args.target, "max_dim": args.max_dim, "max_stages": args.max_stages})
    Y, cert = fibrant_replace_nv(X, args.max_dim, args.max_stages, _budget(args))
    ok, diag = cert.verify()
    rep.add("certificate", steps=len(cert.steps), saturated=cert.saturated, verified=ok, diagnostics=diag)
    for i, st in enumerate(cert.steps):
        rep.add("step", index=i, n=st.n, k=st.k, labels=",".join(map(str, st.labels)))
    for p in X.base.elements:
        same = strata_isomorphic(X, Y, p)
        rep.add("stratum", p=p, isomorphic=same)
        if not same:
            rep.worsen(FAIL)
    if not ok:
        rep.worsen(FAIL)
    if not cert.saturated:
        rep.worsen(UNKNOWN)
    rep.add("result", counts=Y.total.counts())
    if args.save:
        with open(args.save, "w", encoding="utf-8") as fh:
            fh.write(serialize(workspace_of(("cert", cert, "replacement"))))
    return rep


def cmd_vex(res, args) -> Report:
    from .stratified import vex

    X = res.get(args.target, "strat")
    rep = Report("vex", {"target": args.target, "m": args.m})
    V, f = vex(X, args.m, max_dim=args.max_dim)
    rep.add("result", source_counts=X.total.counts(), counts=V.total.counts(), trunc=V.total.trunc_dim)
    f.validate()
    rep.add("structure_map", valid=True)
    return rep


def _presheaf_arg(res, name, max_dim):
    """A presheaf by name, or the nerve presheaf of a stratified object."""
    from .decollage import nerve_presheaf

    try:
        return res.get(name, "presheaf")
    except (UsageError, KeyError):
        X = res.get(name, "strat")
        return nerve_presheaf(X, max_dim)


def cmd_decollage(res, args) -> Report:
    from .decollage import is_decollage

    F = _presheaf_arg(res, args.target, args.max_dim)
    rep = Report("decollage-check", {"target": args.target, "max_dim": args.max_dim})
    v = is_decollage(F, args.max_dim, _budget(args))
    rep.add_verdict(v)
    rep.worsen(status_of(v))
    return rep


def cmd_segal(res, args) -> Report:
    from .decollage import segal_map

    F = _presheaf_arg(res, args.target, args.max_dim)
    sigma = F.base.string(args.string.split("<"))
    rep = Report("segal", {"target": args.target, "string": args.string, "max_dim": args.max_dim})
    f, v = segal_map(F, sigma, args.max_dim, _budget(args))
    rep.add("segal_map", source=f.source.counts(), target=f.target.counts())
    rep.add_verdict(v)
    rep.worsen(status_of(v))
    return rep


def cmd_links_equiv(res, args) -> Report:
    from .homotopy import strata_links_equiv

    f = res.get(args.target, "map")
    rep = Report("links-equiv", {"target": args.target, "max_dim": args.max_dim})
    v = strata_links_equiv(f, _budget(args), max_dim=args.max_dim)
    rep.add_verdict(v)
    rep.worsen(status_of(v))
    return rep


def cmd_certify(res, args) -> Report:
    from .anodyne import cone_certificate, prism_certificate, spine_certificate
    from .stratified import TRIVIAL_INNER, TRIVIAL_LEFT, classify_horn

    rep = Report("certify", {"shape": args.shape, "n": args.n})
    if args.shape == "spine":
        cert = spine_certificate(args.n, _budget(args))
    elif args.shape == "prism":
        labels = _labels(args.labels) if args.labels else ("0",) * (args.n + 1)
        rep.args["labels"] = ",".join(labels)
        cert = prism_certificate(args.n, labels, budget=_budget(args))
    else:
        if not args.target:
            raise UsageError("certify cone needs --target")
        rep.args["target"] = args.target
        X = res.get(args.target, "strat")
        cert = cone_certificate(X, args.n, _budget(args))
    ok, diag = cert.verify()
    rep.add("certificate", kind=cert.kind, steps=len(cert.steps), verified=ok, diagnostics=diag)
    P = cert.start.base
    for i, st in enumerate(cert.steps):
        cls = classify_horn(st.labels, st.n, st.k, P)
        good = cls in (TRIVIAL_INNER, TRIVIAL_LEFT)
        rep.add("step", index=i, n=st.n, k=st.k, labels=",".join(map(str, st.labels)), classification=cls)
        if not good:
            rep.worsen(FAIL)
    if not ok:
        rep.worsen(FAIL)
    if args.save:
        with open(args.save, "w", encoding="utf-8") as fh:
            fh.write(serialize(workspace_of(("cert", cert, f"{args.shape}{args.n}"))))
    return rep


def cmd_verify_cert(res, args) -> Report:
    rep = Report("verify-cert", {"target": args.target})
    for name, cert in res.all_of(args.target, "cert"):
        ok, diag = cert.verify()
        rep.add("certificate", name=name, kind=cert.kind, steps=len(cert.steps), verified=ok, diagnostics=diag)
        if not ok:
            rep.worsen(FAIL)
    return rep


def cmd_base_case(res, args) -> Report:
    from .anodyne import base_case_witness

    labels = _labels(args.labels)
    P = _poset_for(res, args, labels)
    rep = Report("base-case", {"labels": ",".join(labels), "trunc": args.trunc})
    w = base_case_witness(P, labels, args.trunc)
    rep.add("witness", **w)
    if not all(v for v in w.values() if isinstance(v, bool)):
        rep.worsen(FAIL)
    return rep


def cmd_non_lift(res, args) -> Report:
    from .anodyne import non_lifting_witness

    labels = _labels(args.labels)
    n = len(labels) - 1
    P = _poset_for(res, args, labels)
    rep = Report("non-lift", {"labels": ",".join(labels), "k": args.k})
    w = non_lifting_witness(n, args.k, labels, P, _budget(args))
    if w is None:
        rep.add("witness", found=False)
        rep.worsen(UNKNOWN)
        return rep
    ok = w.recheck()
    rep.add("witness", found=True, rechecked=ok, target_counts=w.target.total.counts(), **w.record)
    if not ok:
        rep.worsen(FAIL)
    return rep


def cmd_adjunction(res, args) -> Report:
    from .decollage import adjunction_check, mono_pushforward_check
    from .stratified import nerve_over

    F = res.get(args.target, "presheaf")
    X = res.get(args.against, "strat") if args.against else nerve_over(F.base)
    rep = Report("adjunction", {"target": args.target, "against": args.against or "nerve", "max_dim": args.max_dim})
    r = adjunction_check(F, X, args.max_dim)
    rep.add("adjunction", unit_natural=r.unit_natural, triangle_left=r.triangle_left,
            triangle_right=r.triangle_right, unit_iso=all(r.unit_iso.values()))
    for fail in r.failures[:5]:
        rep.add("failure", detail=fail)
    m = mono_pushforward_check(F)
    rep.add("monomorphisms", all_mono=m.all_mono, legs_injective=m.legs_injective,
            set_trials=m.set_trials, set_failures=m.set_failures)
    if not r.ok:
        rep.worsen(FAIL)
    return rep


def cmd_base_change(res, args) -> Report:
    from .decollage import base_change_iso, compare_strategies

    F = res.get(args.target, "presheaf")
    rep = Report("base-change", {"target": args.target})
    a, b, iso = compare_strategies(F)
    rep.add("strategies", pair_colimit=a.obj.total.counts(), coend=b.obj.total.counts(), isomorphic=iso is not None)
    if iso is None:
        rep.worsen(FAIL)
    sigmas = [F.base.string(args.string.split("<"))] if args.string else F.strings()
    for s in sigmas:
        name = "<".join(map(str, s))
        try:
            bc = base_change_iso(F, s)
            rep.add("base_change", string=name, verified=bc.verify(), counts=bc.pullback.total.counts())
        except RuntimeError as exc:
            rep.add("base_change", string=name, verified=False, error=str(exc))
            rep.worsen(FAIL)
    return rep


def cmd_appendix(res, args) -> Report:
    from . import realization as R
    from .poset import all_posets

    k = args.grid
    rep = Report("appendix-eval", {"grid": k, "max_poset": args.max_poset,
                                   "printed_orientation": args.printed_orientation})
    parts = args.part
    if parts in ("all", "retraction"):
        log = R.CheckLog()
        for n in range(1, args.max_poset + 1):
            for P in all_posets(n):
                log.merge(R.check_retraction(P, k, printed=args.printed_orientation))
        rep.add_log("retraction", log)
    if parts in ("all", "paths"):
        log = R.CheckLog()
        for n in range(1, args.max_path_dim + 1):
            log.merge(R.check_path_contraction(n, k))
        rep.add_log("path_contraction", log)
    if parts in ("all", "mapping"):
        f = sample_map()
        rep.add_log("mapping_path", R.check_mapping_path(f, k))
    if parts in ("all", "lift"):
        f = sample_map()
        log = R.CheckLog()
        for n in (1, 2):
            for kk in range(n + 1):
                data = R.standard_horn_retraction(n, kk)
                log.merge(R.check_horn_retraction(data, k))
                for sigma in (("0",), ("1",), ("0", "1")):
                    log.merge(R.check_lift(f, sigma, data, min(k, 3)))
        rep.add_log("lift", log)
    return rep


def sample_map():
    """``Δ¹ -> Δ²`` over ``[1]``: labels (0,1) and (0,0,1), vertices 0 -> 0 and 1 -> 2."""
    from .poset import chain
    from .simplicial import SimplicialMap
    from .stratified import StratMap, strat_simplex

    P = chain(1)
    A = strat_simplex(P, ("0", "1"), name="A")
    B = strat_simplex(P, ("0", "0", "1"), name="B")
    T, U = A.total, B.total
    asg = {(0,): U.nf((0,)), (1,): U.nf((2,)), (0, 1): U.nf((0, 2))}
    return StratMap(A, B, SimplicialMap(T, U, asg))


COMMANDS = {
    "check-fibrant": cmd_check_fibrant,
    "classify-horn": cmd_classify_horn,
    "gen-set": cmd_gen_set,
    "replace": cmd_replace,
    "vex": cmd_vex,
    "decollage-check": cmd_decollage,
    "segal": cmd_segal,
    "links-equiv": cmd_links_equiv,
    "certify": cmd_certify,
    "verify-cert": cmd_verify_cert,
    "base-case": cmd_base_case,
    "non-lift": cmd_non_lift,
    "adjunction": cmd_adjunction,
    "base-change": cmd_base_change,
    "appendix-eval": cmd_appendix,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-w", "--workspace", action="append", default=[], help="load a .strat file first")
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--budget", type=int, default=10**6, help="search step limit")

    ap = argparse.ArgumentParser(prog="stratsimp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, target=True, max_dim=None):
        p = sub.add_parser(name, parents=[common], help=help_)
        if target:
            p.add_argument("target")
        if max_dim is not None:
            p.add_argument("--max-dim", type=int, default=max_dim)
        return p

    p = add("check-fibrant", "fibrancy verdict for a stratified object", max_dim=3)
    p.add_argument("--tier", choices=("auto", "exact", "bounded"), default="auto")
    p = add("classify-horn", "classify a stratified horn", target=False)
    p.add_argument("--labels", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--poset")
    p = add("gen-set", "list a generating set of horn inclusions", target=False)
    p.add_argument("poset")
    p.add_argument("--kind", default="IH_P")
    p.add_argument("--max-n", type=int, default=2)
    p = add("replace", "fibrant replacement by non-vertical inner horns", max_dim=3)
    p.add_argument("--max-stages", type=int, default=64)
    p.add_argument("--save", help="write the certificate to this file")
    p = add("vex", "apply Ex^m to every stratum", max_dim=None)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--max-dim", type=int, default=None)
    add("decollage-check", "Segal conditions of a presheaf", max_dim=2)
    p = add("segal", "one Segal map", max_dim=2)
    p.add_argument("--string", required=True, help="e.g. 0<1<2")
    add("links-equiv", "strata and links verdict for a map", max_dim=2)
    p = add("certify", "build and verify a cell certificate", target=False)
    p.add_argument("shape", choices=("spine", "prism", "cone"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--labels")
    p.add_argument("--target")
    p.add_argument("--save", help="write the certificate to this file")
    add("verify-cert", "replay certificates from a file")
    p = add("base-case", "the base case of the left-horn induction", target=False)
    p.add_argument("--labels", required=True)
    p.add_argument("--poset")
    p.add_argument("--trunc", type=int, default=3)
    p = add("non-lift", "a fibrant target with no lift against an outer horn", target=False)
    p.add_argument("--labels", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--poset")
    p = add("adjunction", "unit, counit and triangle identities", max_dim=1)
    p.add_argument("--against", help="stratified object for the counit (default: nerve of the poset)")
    p = add("base-change", "restriction to strings commutes with extension")
    p.add_argument("--string")
    p = add("appendix-eval", "exact checks of the topological formulas", target=False)
    p.add_argument("--grid", type=int, default=6)
    p.add_argument("--printed-orientation", action="store_true")
    p.add_argument("--max-poset", type=int, default=3)
    p.add_argument("--max-path-dim", type=int, default=2)
    p.add_argument("--part", choices=("all", "retraction", "paths", "mapping", "lift"), default="all")
    return ap


def run(argv) -> tuple:
    """``(exit code, output text)`` for a command line."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else USAGE_EXIT), ""
    try:
        res = Resolver(args.workspace)
        rep = COMMANDS[args.command](res, args)
    except (UsageError, ParseError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return USAGE_EXIT, f"stratsimp {args.command}: error: {msg}\n"
    except Undetermined as exc:
        rep = Report(args.command, {"target": getattr(args, "target", None) or "-"})
        rep.add("undetermined", reason=str(exc))
        rep.worsen(UNKNOWN)
    return rep.exit_code, emit(rep, args.format)


def main(argv=None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    if code == USAGE_EXIT and out:
        sys.stderr.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "run", "build_parser", "PASS", "FAIL", "UNKNOWN"]
