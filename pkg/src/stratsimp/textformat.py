"""The shared line-oriented text format (``.strat`` files).

A file is a sequence of sections.  Each section starts with a header line
and continues until the next header; ``#`` starts a comment.

::

    poset P
    elem 0 1
    rel 0 < 1

    sset L trunc 1 complete
    simplex a dim 0
    simplex b dim 0
    simplex e dim 1 faces b a

    strat L over P as Ls
    label a 0
    label b 1

Other headers: ``category``, ``map``, ``presheaf`` and ``cert``; see
:func:`parse` for their body lines.  Names share one namespace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._util import csorted, ident
from .homotopy import fmt_nf
from .poset import Poset
from .simplicial import FiniteCategory, SimplicialMap, SimplicialSet, identity_map
from .simplicial.ops import eta_of_word

HEADERS = ("poset", "sset", "category", "strat", "map", "presheaf", "cert")


class ParseError(ValueError):
    def __init__(self, line: int, msg: str, source: str = "<text>"):
        super().__init__(f"{source}:{line}: {msg}")
        self.line = line
        self.msg = msg


@dataclass
class Entry:
    kind: str
    obj: object
    line: int = 0
    extra: dict = field(default_factory=dict)


class Workspace:
    """Named objects loaded from text, in definition order."""

    def __init__(self):
        self.entries: dict = {}

    def __contains__(self, name) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, name: str, kind: str, obj, line: int = 0, **extra) -> None:
        if name in self.entries:
            raise ValueError(f"duplicate name {name!r}")
        if any(c.isspace() for c in name) or not name:
            raise ValueError(f"invalid name {name!r}")
        self.entries[name] = Entry(kind, obj, line, dict(extra))

    def get(self, name: str, kind: str | tuple | None = None):
        if name not in self.entries:
            raise KeyError(f"unknown object {name!r}")
        e = self.entries[name]
        kinds = (kind,) if isinstance(kind, str) else kind
        if kinds is not None and e.kind not in kinds:
            raise KeyError(f"{name!r} is a {e.kind}, expected {' or '.join(kinds)}")
        return e.obj

    def kind_of(self, name: str) -> str:
        return self.entries[name].kind

    def __eq__(self, other) -> bool:
        # Two workspaces are equal when they define the same objects under the same names.
        return isinstance(other, Workspace) and serialize(self) == serialize(other)

    __hash__ = None

    def names(self, kind: str | None = None) -> list:
        return [n for n, e in self.entries.items() if kind is None or e.kind == kind]

    def name_of(self, obj):
        for n, e in self.entries.items():
            if e.obj is obj:
                return n
        return None

    def ensure(self, obj, kind: str, hint: str) -> str:
        """Name of ``obj``, registering it (and what it depends on) if needed."""
        n = self.name_of(obj)
        if n is not None:
            return n
        if kind == "strat":
            self.ensure(obj.base, "poset", obj.base.name or "P")
            if obj.category is not None and hasattr(obj.category, "presentation"):
                self.ensure(obj.category, "category", obj.category.name or "C")
            else:
                self.ensure(obj.total, "sset", (obj.name or hint) + "_total")
        elif kind == "map":
            self.ensure(obj.source, "strat", obj.source.name or "X")
            self.ensure(obj.target, "strat", obj.target.name or "Y")
        elif kind == "presheaf":
            self.ensure(obj.base, "poset", obj.base.name or "P")
            for s in obj.strings():
                X = obj.values[s]
                self.ensure(X, "sset", X.name or "value")
        elif kind == "cert":
            self.ensure(obj.start, "strat", obj.start.name or "start")
            self.ensure(obj.claimed_end, "strat", obj.claimed_end.name or "end")
        name = _fresh(self, hint)
        extra = {}
        if kind == "strat" and obj.category is not None and hasattr(obj.category, "presentation"):
            extra["trunc"] = obj.total.trunc_dim
        self.add(name, kind, obj, **extra)
        return name


def _fresh(ws: Workspace, hint: str) -> str:
    base = "".join(c if not c.isspace() else "_" for c in (hint or "obj")) or "obj"
    name, i = base, 1
    while name in ws:
        i += 1
        name = f"{base}_{i}"
    return name


# -- tokens ------------------------------------------------------------------------------

def parse_nf(tok: str, dims: dict):
    """``id`` or ``id!s<i1>s<i2>...`` against a table of simplex dimensions."""
    sid, _, word = tok.partition("!")
    if sid not in dims:
        raise ValueError(f"unknown simplex {sid!r}")
    idx = []
    if word:
        parts = word.split("s")
        if parts[0] != "" or any(not p.isdigit() for p in parts[1:]):
            raise ValueError(f"bad degeneracy word in {tok!r}")
        idx = [int(p) for p in parts[1:]]
    return (sid, eta_of_word(idx, dims[sid]))


def fmt_string(s) -> str:
    return "<".join(map(str, s))


def parse_string(tok: str, P: Poset):
    return P.string(tok.split("<"))


def fmt_mapspec(f: SimplicialMap) -> str:
    if f.source is f.target and all(f.assignment[s] == f.source.nf(s) for s in f.source.nondeg()):
        return "id"
    parts = [f"{ident(s)}->{fmt_nf(f.assignment[s])}" for s in f.source.nondeg()]
    return ";".join(parts) if parts else "-"


def parse_mapspec(tok: str, src: SimplicialSet, tgt: SimplicialSet) -> SimplicialMap:
    if tok == "id":
        if src is not tgt:
            raise ValueError("'id' needs equal source and target")
        return identity_map(src)
    asg = {}
    names = {ident(s): s for s in src.nondeg()}
    dims = {ident(s): tgt.dim_of(s) for s in tgt.nondeg()}
    back = {ident(s): s for s in tgt.nondeg()}
    if tok != "-":
        for part in tok.split(";"):
            a, arrow, b = part.partition("->")
            if not arrow:
                raise ValueError(f"bad assignment {part!r}")
            if a not in names:
                raise ValueError(f"unknown source simplex {a!r}")
            sid, eta = parse_nf(b, dims)
            asg[names[a]] = (back[sid], eta)
    missing = [ident(s) for s in src.nondeg() if s not in asg]
    if missing:
        raise ValueError(f"map misses {missing[0]}")
    return SimplicialMap(src, tgt, asg)


# -- parsing ----------------------------------------------------------------------------

def _sections(text: str, source: str):
    sections = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] in HEADERS:
            sections.append((no, toks, []))
        else:
            if not sections:
                raise ParseError(no, f"line outside any section: {toks[0]!r}", source)
            sections[-1][2].append((no, toks))
    return sections


def parse(text: str, source: str = "<text>", into: Workspace | None = None) -> Workspace:
    """Parse and validate a workspace; errors carry the line number."""
    ws = into if into is not None else Workspace()
    for no, head, body in _sections(text, source):
        try:
            _BUILDERS[head[0]](ws, no, head, body)
        except ParseError:
            raise
        except (ValueError, KeyError, IndexError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            line = getattr(exc, "lineno", no)
            raise ParseError(line, str(msg), source) from None
    return ws


def parse_file(path, into: Workspace | None = None) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), source=str(path), into=into)


class _LineError(ValueError):
    def __init__(self, line, msg):
        super().__init__(msg)
        self.lineno = line


def _expect(toks, n, no, form):
    if len(toks) < n:
        raise _LineError(no, f"expected '{form}'")


def _poset(ws, no, head, body):
    _expect(head, 2, no, "poset <name>")
    elems, rels = [], []
    for ln, toks in body:
        if toks[0] == "elem":
            elems.extend(toks[1:])
        elif toks[0] == "rel":
            if len(toks) != 4 or toks[2] != "<":
                raise _LineError(ln, "expected 'rel <a> < <b>'")
            unknown = [t for t in (toks[1], toks[3]) if t not in elems]
            if unknown:
                raise _LineError(ln, f"relation mentions unknown element {unknown[0]!r}")
            rels.append((toks[1], toks[3]))
        else:
            raise _LineError(ln, f"unexpected {toks[0]!r} in poset section")
    if len(set(elems)) != len(elems):
        raise _LineError(no, "repeated element")
    ws.add(head[1], "poset", Poset(elems, rels, name=head[1]), no)


def _sset(ws, no, head, body):
    _expect(head, 4, no, "sset <name> trunc <d> [complete] [cosk <c>]")
    if head[2] != "trunc":
        raise _LineError(no, "expected 'trunc' after the sset name")
    trunc = int(head[3])
    rest = head[4:]
    complete = "complete" in rest
    cosk = None
    if "cosk" in rest:
        cosk = int(rest[rest.index("cosk") + 1])
    dims, raw = {}, {}
    for ln, toks in body:
        if toks[0] != "simplex" or len(toks) < 4 or toks[2] != "dim":
            raise _LineError(ln, "expected 'simplex <id> dim <n> [faces ...]'")
        sid, d = toks[1], int(toks[3])
        if sid in dims:
            raise _LineError(ln, f"duplicate simplex {sid!r}")
        faces = toks[5:] if len(toks) > 4 and toks[4] == "faces" else []
        if len(faces) != (d + 1 if d > 0 else 0):
            raise _LineError(ln, f"simplex {sid} of dimension {d} needs {d + 1 if d else 0} faces")
        dims[sid] = d
        raw[sid] = (ln, d, faces)
    data = {}
    for sid, (ln, d, faces) in raw.items():
        try:
            data[sid] = (d, tuple(parse_nf(t, dims) for t in faces))
        except ValueError as exc:
            raise _LineError(ln, str(exc)) from None
    X = SimplicialSet(data, trunc, complete=complete, name=head[1], cosk=cosk)
    if cosk is not None:
        X.cosk = cosk
    ws.add(head[1], "sset", X, no, cosk=cosk)


def _category(ws, no, head, body):
    _expect(head, 2, no, "category <name>")
    objects, gens, rels, inv = [], {}, [], []
    for ln, toks in body:
        if toks[0] == "object":
            objects.extend(toks[1:])
        elif toks[0] == "gen":
            if len(toks) not in (4, 5) or (len(toks) == 5 and toks[4] != "invertible"):
                raise _LineError(ln, "expected 'gen <name> <source> <target> [invertible]'")
            gens[toks[1]] = (toks[2], toks[3])
            if len(toks) == 5:
                inv.append(toks[1])
        elif toks[0] == "relation":
            if len(toks) != 4 or toks[2] != "=":
                raise _LineError(ln, "expected 'relation <word> = <word>'")
            rels.append((_word(toks[1]), _word(toks[3])))
        else:
            raise _LineError(ln, f"unexpected {toks[0]!r} in category section")
    C = FiniteCategory.from_presentation(objects, gens, rels, invertible=inv, name=head[1])
    C.presentation = (tuple(objects), dict(gens), list(rels), list(inv))
    ws.add(head[1], "category", C, no)


def _word(tok):
    return () if tok == "id" else tuple(tok.split("."))


def _strat(ws, no, head, body):
    from .stratified import make_strat, strat_from_category

    _expect(head, 4, no, "strat <sset> over <poset> [as <name>] [trunc <d>]")
    if head[2] != "over":
        raise _LineError(no, "expected 'over'")
    src, P = head[1], ws.get(head[3], "poset")
    opts = dict(zip(head[4::2], head[5::2]))
    name = opts.get("as", src)
    labels, where = {}, {}
    for ln, toks in body:
        if toks[0] != "label" or len(toks) != 3:
            raise _LineError(ln, "expected 'label <vertex> <element>'")
        if toks[1] in labels:
            raise _LineError(ln, f"vertex {toks[1]} labelled twice")
        if toks[2] not in P:
            raise _LineError(ln, f"label {toks[2]!r} of vertex {toks[1]} is not in the poset")
        labels[toks[1]] = toks[2]
        where[toks[1]] = ln
    kind = ws.kind_of(src) if src in ws else None
    if kind == "category":
        C = ws.get(src)
        trunc = int(opts.get("trunc", 3))
        X = strat_from_category(C, P, labels, trunc_dim=trunc, name=name)
        ws.add(name, "strat", X, no, trunc=trunc)
        return
    T = ws.get(src, "sset")
    for e in T.nondeg(1):
        a, b = T.vertices(T.nf(e))
        if a in labels and b in labels and not P.leq(labels[a], labels[b]):
            # Blame the later of the two label lines.
            raise _LineError(max(where[a], where[b]),
                             f"edge {e} goes from label {labels[a]} to {labels[b]}, which is not increasing")
    X = make_strat(T, P, labels, name=name)
    ws.add(name, "strat", X, no)


def _map(ws, no, head, body):
    from .stratified import StratMap

    _expect(head, 6, no, "map <name> from <strat> to <strat>")
    X, Y = ws.get(head[3], "strat"), ws.get(head[5], "strat")
    T = Y.total
    dims = {ident(s): T.dim_of(s) for s in T.nondeg()}
    back = {ident(s): s for s in T.nondeg()}
    srcs = {ident(s): s for s in X.total.nondeg()}
    asg = {}
    for ln, toks in body:
        if toks[0] != "assign" or len(toks) != 3:
            raise _LineError(ln, "expected 'assign <simplex> <normal form>'")
        if toks[1] not in srcs:
            raise _LineError(ln, f"unknown source simplex {toks[1]!r}")
        try:
            sid, eta = parse_nf(toks[2], dims)
        except ValueError as exc:
            raise _LineError(ln, str(exc)) from None
        asg[srcs[toks[1]]] = (back[sid], eta)
    missing = [ident(s) for s in X.total.nondeg() if s not in asg]
    if missing:
        raise _LineError(no, f"map misses simplex {missing[0]}")
    f = StratMap(X, Y, SimplicialMap(X.total, Y.total, asg, validate=False))
    f.validate()
    ws.add(head[1], "map", f, no)


def _presheaf(ws, no, head, body):
    from .decollage import Presheaf

    _expect(head, 4, no, "presheaf <name> over <poset>")
    P = ws.get(head[3], "poset")
    vals, specs = {}, {}
    for ln, toks in body:
        try:
            if toks[0] == "value" and len(toks) == 4 and toks[2] == "=":
                vals[parse_string(toks[1], P)] = ws.get(toks[3], "sset")
            elif toks[0] == "restrict" and len(toks) == 6 and toks[2] == "->" and toks[4] == ":":
                specs[(parse_string(toks[1], P), parse_string(toks[3], P))] = (ln, toks[5])
            else:
                raise ValueError(f"unexpected line in presheaf section: {' '.join(toks)}")
        except (ValueError, KeyError) as exc:
            raise _LineError(ln, exc.args[0]) from None
    for s in P.strings():
        if s not in vals:
            raise _LineError(no, f"no value for the string {fmt_string(s)}")
    res = {}
    for (s, t), (ln, tok) in specs.items():
        if not set(t) < set(s):
            raise _LineError(ln, f"{fmt_string(t)} is not a proper substring of {fmt_string(s)}")
        try:
            res[(s, t)] = parse_mapspec(tok, vals[s], vals[t])
        except ValueError as exc:
            raise _LineError(ln, str(exc)) from None
    # Restrictions that are not listed are composed along removals of one element.
    for s in csorted(vals):
        for t in csorted(vals):
            if set(t) < set(s) and (s, t) not in res:
                res[(s, t)] = _compose_path(res, s, t, vals, P)
    ws.add(head[1], "presheaf", Presheaf(P, vals, res, name=head[1]), no)


def _compose_path(res, s, t, vals, P):
    cur, f = s, identity_map(vals[s])
    while cur != t:
        drop = next(x for x in cur if x not in t)
        nxt = P.string([x for x in cur if x != drop])
        if (cur, nxt) not in res:
            raise ValueError(f"no restriction {fmt_string(cur)} -> {fmt_string(nxt)}")
        f = f.then(res[(cur, nxt)])
        cur = nxt
    return f


def _cert(ws, no, head, body):
    from .anodyne import CellCertificate, Step

    _expect(head, 6, no, "cert <name> kind <kind> start <strat>")
    if head[2] != "kind" or head[4] != "start":
        raise _LineError(no, "expected 'cert <name> kind <kind> start <strat>'")
    start = ws.get(head[5], "strat")
    steps, end = [], None
    for ln, toks in body:
        if toks[0] == "end":
            end = ws.get(toks[1], "strat")
            continue
        if toks[0] != "step" or len(toks) < 5 or toks[3] != "labels":
            raise _LineError(ln, "expected 'step <n> <k> labels <l0,...> attach <v.v=nf> ...'")
        n, k = int(toks[1]), int(toks[2])
        labels = tuple(toks[4].split(","))
        attach = {}
        if len(toks) > 5:
            if toks[5] != "attach":
                raise _LineError(ln, "expected 'attach'")
            for tok in toks[6:]:
                key, eq, val = tok.partition("=")
                if not eq:
                    raise _LineError(ln, f"bad attach entry {tok!r}")
                attach[tuple(int(v) for v in key.split("."))] = val
        steps.append((ln, Step(n, k, labels, attach)))
    if end is None:
        raise _LineError(no, "certificate has no 'end' line")
    # Attaching maps name simplices of the object built so far; resolve them step by step.
    from .anodyne import attach_horn

    cur = start
    resolved = []
    for idx, (ln, st) in enumerate(steps):
        dims = {ident(s): cur.total.dim_of(s) for s in cur.total.nondeg()}
        back = {ident(s): s for s in cur.total.nondeg()}
        try:
            att = {}
            for key, tok in st.attach.items():
                sid, eta = parse_nf(tok, dims)
                att[key] = (back[sid], eta)
            st = Step(st.n, st.k, st.labels, att)
            cur = attach_horn(cur, st, idx)
        except ValueError as exc:
            raise _LineError(ln, str(exc)) from None
        resolved.append(st)
    cert = CellCertificate(start, resolved, end, kind=head[3])
    ok, diag = cert.verify()
    if not ok:
        raise _LineError(no, f"certificate does not verify: {diag}")
    ws.add(head[1], "cert", cert, no)


_BUILDERS = {
    "poset": _poset,
    "sset": _sset,
    "category": _category,
    "strat": _strat,
    "map": _map,
    "presheaf": _presheaf,
    "cert": _cert,
}


# -- serialization ------------------------------------------------------------------------

def serialize(ws: Workspace) -> str:
    """Text for every entry in definition order; ``parse`` inverts it."""
    out = []
    for name, e in ws.entries.items():
        out.extend(_WRITERS[e.kind](ws, name, e))
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n" if out else ""


def _w_poset(ws, name, e):
    P = e.obj
    lines = [f"poset {name}"]
    if P.elements:
        lines.append("elem " + " ".join(map(str, P.elements)))
    lines.extend(f"rel {a} < {b}" for a, b in P.covers())
    return lines


def _w_sset(ws, name, e):
    X = e.obj
    head = f"sset {name} trunc {X.trunc_dim}"
    if X.complete:
        head += " complete"
    if e.extra.get("cosk") is not None or (X.cosk is not None and not X.complete):
        head += f" cosk {X.cosk}"
    names = {}
    for s in X.nondeg():
        t = ident(s)
        if t in names:
            raise ValueError(f"simplex names collide on {t!r}")
        names[t] = s
    lines = [head]
    for s in X.nondeg():
        d = X.dim_of(s)
        line = f"simplex {ident(s)} dim {d}"
        if d > 0:
            line += " faces " + " ".join(fmt_nf(f) for f in X.faces(s))
        lines.append(line)
    return lines


def _w_category(ws, name, e):
    objects, gens, rels, inv = e.obj.presentation
    lines = [f"category {name}", "object " + " ".join(objects)]
    for g in gens:
        s, t = gens[g]
        lines.append(f"gen {g} {s} {t}" + (" invertible" if g in inv else ""))
    for lhs, rhs in rels:
        lines.append(f"relation {'.'.join(lhs) or 'id'} = {'.'.join(rhs) or 'id'}")
    return lines


def _w_strat(ws, name, e):
    X = e.obj
    P = ws.name_of(X.base)
    if X.category is not None and ws.name_of(X.category) is not None:
        src = ws.name_of(X.category)
        head = f"strat {src} over {P} as {name} trunc {e.extra.get('trunc', X.total.trunc_dim)}"
    else:
        src = ws.name_of(X.total)
        head = f"strat {src} over {P}" + (f" as {name}" if name != src else "")
    lines = [head]
    for v in X.total.nondeg(0):
        lines.append(f"label {ident(v)} {X.labels[v]}")
    return lines


def _w_map(ws, name, e):
    f = e.obj
    lines = [f"map {name} from {ws.name_of(f.source)} to {ws.name_of(f.target)}"]
    for s in f.source.total.nondeg():
        lines.append(f"assign {ident(s)} {fmt_nf(f.map.assignment[s])}")
    return lines


def _w_presheaf(ws, name, e):
    F = e.obj
    lines = [f"presheaf {name} over {ws.name_of(F.base)}"]
    for s in F.strings():
        lines.append(f"value {fmt_string(s)} = {ws.name_of(F.values[s])}")
    for (s, t), f in sorted(F.restrictions.items(), key=lambda kv: (fmt_string(kv[0][0]), fmt_string(kv[0][1]))):
        if len(t) != len(s) - 1:
            continue
        lines.append(f"restrict {fmt_string(s)} -> {fmt_string(t)} : {fmt_mapspec(f)}")
    return lines


def _w_cert(ws, name, e):
    c = e.obj
    lines = [f"cert {name} kind {c.kind} start {ws.name_of(c.start)}"]
    for st in c.steps:
        att = " ".join(
            f"{'.'.join(map(str, key))}={fmt_nf(st.attach[key])}" for key in csorted(st.attach)
        )
        line = f"step {st.n} {st.k} labels {','.join(map(str, st.labels))}"
        if att:
            line += " attach " + att
        lines.append(line)
    lines.append(f"end {ws.name_of(c.claimed_end)}")
    return lines


_WRITERS = {
    "poset": _w_poset,
    "sset": _w_sset,
    "category": _w_category,
    "strat": _w_strat,
    "map": _w_map,
    "presheaf": _w_presheaf,
    "cert": _w_cert,
}


def workspace_of(*items) -> Workspace:
    """Register objects (with their dependencies) under generated names."""
    ws = Workspace()
    for kind, obj, hint in items:
        ws.ensure(obj, kind, hint)
    return ws
