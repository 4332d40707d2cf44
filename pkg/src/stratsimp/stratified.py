"""Simplicial sets over the nerve of a finite poset."""

from __future__ import annotations

from dataclasses import dataclass, field

from ._util import Budget, Undetermined, canon_key, csorted, ident
from .homotopy import (
    Verdict,
    combine,
    equivalent,
    fmt_nf,
    horn,
    horn_faces,
    not_equivalent,
    unknown,
    unknown_from,
)
from .poset import Poset, monotone_tuples
from .simplicial import (
    FiniteCategory,
    SimplicialMap,
    SimplicialSet,
    chain_nf,
    disjoint_union,
    ex,
    nerve,
    poset_nerve,
    product,
    pushout,
    simplex,
)
from .simplicial.constructions import product_nf
from .simplicial.hom import cosimplicial_hom, product_cosimplicial
from .simplicial.search import MapSearch, iso_check

TRIVIAL_INNER = "TrivialInner"
TRIVIAL_LEFT = "TrivialLeft"
TRIVIAL_RIGHT = "TrivialRight"
NOT_TRIVIAL = "NotTrivial"


class StratSSet:
    """A simplicial set with monotone vertex labels in a poset."""

    def __init__(self, total: SimplicialSet, base: Poset, labels: dict, name=None, category=None):
        self.total = total
        self.base = base
        self.labels = dict(labels)
        self.name = name or total.name
        # Set when the total space is the nerve of ``category``; enables the exact fibrancy tier.
        self.category = category
        self._structure = None

    def __repr__(self) -> str:
        return f"StratSSet({self.name or '?'} over {self.base.name or '?'})"

    def label(self, v):
        return self.labels[v]

    def label_of(self, nf):
        """Labels of the vertices of a simplex given in normal form."""
        return tuple(self.labels[v] for v in self.total.vertices(nf))

    @property
    def structure(self) -> SimplicialMap:
        if self._structure is None:
            X = self.total
            N = poset_nerve(self.base)
            asg = {s: chain_nf(self.label_of(X.nf(s))) for s in X.nondeg()}
            self._structure = SimplicialMap(X, N, asg, validate=False)
        return self._structure

    def used_labels(self) -> list:
        return csorted(set(self.labels.values()))


@dataclass
class StratMap:
    source: StratSSet
    target: StratSSet
    map: SimplicialMap

    def validate(self) -> None:
        self.map.validate()
        for v in self.source.total.nondeg(0):
            w = self.map.assignment[v][0]
            if self.source.labels[v] != self.target.labels[w]:
                raise ValueError(f"map does not preserve the label of vertex {ident(v)}")


def make_strat(X: SimplicialSet, P: Poset, labels: dict, name=None, category=None) -> StratSSet:
    """Stratify ``X`` over ``P``; labels must weakly increase along every edge."""
    for v in X.nondeg(0):
        if v not in labels:
            raise ValueError(f"vertex {ident(v)} has no label")
        if labels[v] not in P:
            raise ValueError(f"label {labels[v]!r} of vertex {ident(v)} is not in the poset")
    for e in X.nondeg(1):
        a, b = X.vertices(X.nf(e))
        if not P.leq(labels[a], labels[b]):
            raise ValueError(
                f"edge {ident(e)} goes from label {labels[a]} to {labels[b]}, which is not increasing"
            )
    return StratSSet(X, P, {v: labels[v] for v in X.nondeg(0)}, name=name, category=category)


def strat_simplex(P: Poset, labels, name=None) -> StratSSet:
    """``Δ^n`` stratified by a monotone label tuple."""
    labels = tuple(labels)
    D = simplex(len(labels) - 1)
    return make_strat(D, P, {(i,): labels[i] for i in range(len(labels))}, name=name)


def strat_subcomplex(X: StratSSet, sids, name=None) -> StratSSet:
    sub = X.total.subobject(sids, name=name)
    return StratSSet(sub, X.base, {v: X.labels[v] for v in sub.nondeg(0)}, name=name)


def strat_from_category(C: FiniteCategory, P: Poset, obj_labels: dict, trunc_dim=3, name=None) -> StratSSet:
    """Nerve of ``C`` stratified by a functor to ``P`` given on objects."""
    for f in C.nonidentity():
        if not P.leq(obj_labels[C.src(f)], obj_labels[C.tgt(f)]):
            raise ValueError(f"morphism {f!r} decreases the label")
    N = nerve(C, trunc_dim, name=name)
    return StratSSet(N, P, {x: obj_labels[x] for x in C.objects}, name=name or C.name, category=C)


def nerve_over(P: Poset) -> StratSSet:
    """``N(P)`` with its identity stratification."""
    N = poset_nerve(P)
    C = FiniteCategory.from_poset(P)
    return StratSSet(N, P, {(x,): x for x in P.elements}, name=f"N{P.name or ''}", category=_PosetCat(C))


class _PosetCat:
    """Marks poset nerves as category-presented (ids are strings, not chains of arrows)."""

    def __init__(self, C):
        self.C = C


def stratum(X: StratSSet, p) -> SimplicialSet:
    """Full simplicial subset on the simplices all of whose vertices are labelled ``p``."""
    if p not in X.base:
        raise ValueError(f"{p!r} is not an element of the poset")
    T = X.total
    keep = [s for s in T.nondeg() if all(X.labels[v] == p for v in T.vertices(T.nf(s)))]
    out = T.subobject(keep, name=f"{X.name}_{p}")
    out.cosk = T.cosk
    return out


def strat_stratum(X: StratSSet, p) -> StratSSet:
    S = stratum(X, p)
    return StratSSet(S, X.base, {v: p for v in S.nondeg(0)}, name=S.name)


def tensor(X: StratSSet, K: SimplicialSet, name=None) -> StratSSet:
    """``X ⋊ K``: the product with ``K``, stratified through the first factor."""
    T = product(X.total, K, name=name)
    labels = {s: X.labels[s[0][0]] for s in T.nondeg(0)}
    return StratSSet(T, X.base, labels, name=name)


def tensor_nf(x, k):
    return product_nf(x, k)


def rel_mapping_space(X: StratSSet, Y: StratSSet, max_dim: int, budget_limit=10**6, name=None):
    """``Map_{/P}(X, Y)`` through dimension ``max_dim``."""
    if X.base is not Y.base and X.base.elements != Y.base.elements:
        raise ValueError("stratified objects live over different posets")
    D = product_cosimplicial(X.total)

    def allowed(n):
        def pred(sid, nf):
            if len(nf[1]) != 1:
                return True
            return Y.labels[nf[0]] == X.labels[sid[0][0]]

        return pred

    return cosimplicial_hom(
        D, Y.total, max_dim, allowed=allowed, budget_limit=budget_limit, name=name, tag="r", cosk=Y.total.cosk
    )


def string_object(P: Poset, sigma, name=None) -> StratSSet:
    """A string ``p_0 < ... < p_m`` as the stratified simplex ``Δ^m``."""
    sigma = P.string(sigma)
    return strat_simplex(P, sigma, name=name or "{" + "<".join(map(str, sigma)) + "}")


def link(X: StratSSet, p, q, max_dim: int, budget_limit=10**6) -> SimplicialSet:
    """``Map_{/P}({p<q}, X)``."""
    if not X.base.lt(p, q):
        raise ValueError(f"link needs {p!r} < {q!r}")
    return rel_mapping_space(string_object(X.base, (p, q)), X, max_dim, budget_limit, name=f"link_{p}_{q}")


# -- horns over P --------------------------------------------------------------------

def classify_horn(labels, n: int, k: int, P: Poset | None = None) -> str:
    labels = tuple(labels)
    if len(labels) != n + 1:
        raise ValueError(f"need {n + 1} labels, got {len(labels)}")
    if not 0 <= k <= n or n < 1:
        raise ValueError(f"horn index k={k} out of range for n={n}")
    if P is not None and not P.is_monotone_tuple(labels):
        raise ValueError(f"labels {labels} are not monotone")
    if 0 < k < n:
        return TRIVIAL_INNER
    if k == 0 and labels[0] == labels[1]:
        return TRIVIAL_LEFT
    if k == n and labels[n - 1] == labels[n]:
        return TRIVIAL_RIGHT
    return NOT_TRIVIAL


KINDS = ("E_P", "J_P", "IH_P", "LH_P", "IH_P_nv")


def in_kind(kind: str, labels, n: int, k: int) -> bool:
    c = classify_horn(labels, n, k)
    if kind == "E_P":
        return n == 1 and c != NOT_TRIVIAL
    if kind == "J_P":
        return c != NOT_TRIVIAL
    if kind == "IH_P":
        return c == TRIVIAL_INNER
    if kind == "LH_P":
        return c in (TRIVIAL_INNER, TRIVIAL_LEFT)
    if kind == "IH_P_nv":
        return c == TRIVIAL_INNER and len(set(labels)) > 1
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class Generator:
    n: int
    k: int
    labels: tuple

    def horn(self, P: Poset) -> StratSSet:
        H = horn(self.n, self.k)
        return StratSSet(H, P, {v: self.labels[v[0]] for v in H.nondeg(0)}, name=f"L{self.n}_{self.k}")

    def simplex(self, P: Poset) -> StratSSet:
        return strat_simplex(P, self.labels)


@dataclass
class GeneratorSet:
    kind: str
    base: Poset
    items: list = field(default_factory=list)

    def revalidate(self) -> bool:
        return all(
            self.base.is_monotone_tuple(g.labels) and in_kind(self.kind, g.labels, g.n, g.k) for g in self.items
        )


def generating_set(P: Poset, kind: str, max_n: int) -> GeneratorSet:
    """Horn inclusions of the given kind up to dimension ``max_n`` (``E_P`` only has ``n = 1``)."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    top = 1 if kind == "E_P" else max_n
    items = []
    for n in range(1, top + 1):
        for labels in monotone_tuples(P, n + 1):
            for k in range(n + 1):
                if in_kind(kind, labels, n, k):
                    items.append(Generator(n, k, tuple(labels)))
    return GeneratorSet(kind, P, items)


# -- lifting against stratified horns ----------------------------------------------------

def horn_failures(X: StratSSet, n: int, k: int, label_pred, budget=None, first_only=True):
    """Maps ``Λ^n_k -> X`` over ``P`` with ``label_pred(labels)`` and no filler.

    Any filler in ``X`` automatically lies over the unique simplex of ``N(P)``
    with those vertex labels, so relative and absolute filling agree here.
    """
    T = X.total
    T.require(n, "horn filling")
    H = horn(n, k)
    filled = set()
    for x in T.simplices(n):
        bnd = T.boundary(x)
        filled.add(bnd[:k] + bnd[k + 1:])
    faces = horn_faces(n, k)
    out = []
    if n == 1:
        # Λ¹_k is a single vertex; the other label is free and must be matched by the filler.
        for x in T.simplices(1):
            v0, v1 = T.vertices(x)
            vs = (v0, v1)
            filled.add(((vs[k], (0,)), X.labels[vs[1 - k]]))
    for h in MapSearch(H, T, budget=budget):
        if n == 1:
            a = X.labels[h.assignment[(k,)][0]]
            options = []
            for b in X.base.elements:
                labels = (a, b) if k == 0 else (b, a)
                if X.base.is_monotone_tuple(labels) and label_pred(labels):
                    if (h.assignment[(k,)], b) not in filled:
                        options.append(labels)
        else:
            labels = tuple(X.labels[h.assignment[(v,)][0]] for v in range(n + 1))
            options = [labels] if label_pred(labels) and tuple(h.assignment[f] for f in faces) not in filled else []
        for labels in options:
            out.append((labels, h))
            if first_only:
                return out
    return out


def _horn_record(n, k, labels, h) -> dict:
    return {
        "n": n,
        "k": k,
        "labels": ",".join(map(str, labels)),
        "horn": ";".join(f"{ident(s)}->{fmt_nf(h.assignment[s])}" for s in h.source.nondeg()),
    }


def _definitive(X: SimplicialSet, max_dim: int) -> bool:
    return X.cosk is not None and max_dim >= X.cosk + 1


def _conservative_failure(X: StratSSet):
    """A non-invertible morphism between objects with equal labels, or ``None``."""
    C = X.category
    if isinstance(C, _PosetCat):
        return None
    for f in C.nonidentity():
        if X.labels[C.src(f)] == X.labels[C.tgt(f)] and not C.is_iso(f):
            return f
    return None


def is_fibrant(X: StratSSet, max_dim: int = 3, budget: Budget | int | None = None, tier: str = "auto") -> Verdict:
    """Inner horn filling plus horn filling inside each stratum.

    ``tier="auto"`` uses the exact conservativity test for category-presented
    inputs and the bounded search otherwise; ``"exact"`` and ``"bounded"``
    force one tier.
    """
    if tier not in ("auto", "exact", "bounded"):
        raise ValueError(f"unknown tier {tier!r}")
    if tier != "bounded" and X.category is not None:
        bad = _conservative_failure(X)
        if bad is None:
            return equivalent("conservative_nerve", tier="exact", recheck=lambda: _conservative_failure(X) is None)
        C = X.category
        return not_equivalent(
            "non_invertible_in_stratum", tier="exact", morphism=str(bad),
            stratum=str(X.labels[C.src(bad)]),
            recheck=lambda: not C.is_iso(bad) and X.labels[C.src(bad)] == X.labels[C.tgt(bad)],
        )
    if tier == "exact":
        return unknown("not_category_presented")
    return fibrancy_bounded(X, max_dim, budget)


def fibrancy_bounded(X: StratSSet, max_dim: int, budget=None) -> Verdict:
    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 10**6)
    T = X.total
    try:
        for n in range(1, max_dim + 1):
            for k in range(n + 1):
                inner = 0 < k < n
                pred = (lambda labels: True) if inner else (lambda labels: len(set(labels)) == 1)
                bad = horn_failures(X, n, k, pred, budget)
                if bad:
                    labels, h = bad[0]
                    rec = _horn_record(n, k, labels, h)
                    return not_equivalent(
                        "unfilled_inner_horn" if inner else "unfilled_stratum_horn",
                        tier="bounded", recheck=lambda n=n, k=k, h=h, labels=labels: _unfilled(X, n, k, h, labels), **rec,
                    )
    except Undetermined as exc:
        return unknown_from(exc)
    return equivalent(
        "horn_filling", tier="bounded", max_dim=max_dim, definitive=_definitive(T, max_dim),
        recheck=lambda: True,
    )


def _unfilled(X: StratSSet, n, k, h, labels) -> bool:
    T = X.total
    if n == 1:
        x = h.assignment[(k,)]
        return not any(
            T.vertices(y)[k] == x[0] and X.labels[T.vertices(y)[1 - k]] == labels[1 - k] for y in T.simplices(1)
        )
    want = tuple(h.assignment[f] for f in horn_faces(n, k))
    for x in T.simplices(n):
        bnd = T.boundary(x)
        if bnd[:k] + bnd[k + 1:] == want:
            return False
    return True


def relative_lift_failures(f: StratMap, n: int, k: int, label_pred, budget=None):
    """Lifting problems ``(Λ^n_k -> X, Δ^n -> Y)`` against ``f`` without solution."""
    X, Y = f.source.total, f.target.total
    X.require(n, "relative horn filling")
    Y.require(n, "relative horn filling")
    H = horn(n, k)
    faces = horn_faces(n, k)
    over = {}
    for x in X.simplices(n):
        bnd = X.boundary(x)
        over.setdefault(bnd[:k] + bnd[k + 1:], set()).add(f.map(x))
    ybyhorn = {}
    for y in Y.simplices(n):
        bnd = Y.boundary(y)
        ybyhorn.setdefault(bnd[:k] + bnd[k + 1:], []).append(y)
    for h in MapSearch(H, X, budget=budget):
        key = tuple(h.assignment[t] for t in faces)
        have = over.get(key, set())
        for y in ybyhorn.get(tuple(f.map(s) for s in key), ()):
            labels = f.target.label_of(y)
            if label_pred(labels) and y not in have:
                return labels, h, y
    return None


def is_jk_fibration(f: StratMap, max_dim: int = 3, budget=None) -> Verdict:
    """The three lifting conditions for a map between fibrant objects, reported separately."""
    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 10**6)
    advisory = not (is_fibrant(f.source, max_dim).equivalent and is_fibrant(f.target, max_dim).equivalent)

    def run(tests, name):
        try:
            for n, k, pred in tests:
                bad = relative_lift_failures(f, n, k, pred, budget)
                if bad is not None:
                    labels, h, y = bad
                    return not_equivalent(
                        "lifting_failure", condition=name, target=fmt_nf(y),
                        recheck=lambda n=n, k=k, h=h, y=y: _relative_unfilled(f, n, k, h, y),
                        **_horn_record(n, k, labels, h),
                    )
        except Undetermined as exc:
            return unknown_from(exc)
        return equivalent("rlp", condition=name, max_dim=max_dim, recheck=lambda: True)

    def jp(n, k):
        return lambda labels: classify_horn(labels, n, k) != NOT_TRIVIAL

    def const(labels):
        return len(set(labels)) == 1

    everything = lambda labels: True  # noqa: E731
    inner = [(n, k, everything) for n in range(2, max_dim + 1) for k in range(1, n)]
    c3 = [(n, k, jp(n, k)) for n in range(1, max_dim + 1) for k in range(n + 1)]
    c4 = inner + [(n, k, const) for n in range(1, max_dim + 1) for k in (0, n)]
    c5 = inner + [(1, k, const) for k in (0, 1)]
    parts = [
        ("rlp_J_P", run(c3, "rlp_J_P")),
        ("inner_and_strata_kan", run(c4, "inner_and_strata_kan")),
        ("inner_and_E_P", run(c5, "inner_and_E_P")),
    ]
    out = combine(parts, kind="jk_fibration")
    out.details.update({"agree": len({v.outcome for _, v in parts}) == 1, "advisory": advisory})
    return out


def _relative_unfilled(f, n, k, h, y) -> bool:
    X = f.source.total
    want = tuple(h.assignment[t] for t in horn_faces(n, k))
    for x in X.simplices(n):
        bnd = X.boundary(x)
        if bnd[:k] + bnd[k + 1:] == want and f.map(x) == y:
            return False
    return True


# -- vertical Ex ----------------------------------------------------------------------

def vex(X: StratSSet, m: int, max_dim: int | None = None, budget_limit=10**6):
    """Replace every stratum ``X_p`` by ``Ex^m(X_p)`` through a pushout along ``⨿ X_p``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    T = X.total
    if m == 0:
        return X, StratMap(X, X, SimplicialMap(T, T, {s: T.nf(s) for s in T.nondeg()}, validate=False))
    if max_dim is None:
        max_dim = T.dim if T.complete else T.trunc_dim
    ps = X.used_labels()
    strata = {p: stratum(X, p) for p in ps}
    exs = {p: ex(strata[p], m, max_dim=max_dim, budget_limit=budget_limit) for p in ps}
    A = disjoint_union([(p, strata[p]) for p in ps])
    E = disjoint_union([(p, exs[p][0]) for p in ps])
    to_x = SimplicialMap(A, T, {(p, s): T.nf(s) for p, s in A.nondeg()}, validate=False)
    to_e = {}
    for p, s in A.nondeg():
        sid, eta = exs[p][1].assignment[s]
        to_e[(p, s)] = ((p, sid), eta)
    to_e = SimplicialMap(A, E, to_e, validate=False)

    def naming(key, sid):
        return sid if key == "B" else ("vex", sid)

    V, cocone = pushout(to_x, to_e, name=f"VEx{m}({X.name})", naming=naming)
    if not T.complete:
        V.trunc_dim = min(V.trunc_dim, T.trunc_dim)
    labels = {}
    for v in T.nondeg(0):
        labels[cocone["B"].assignment[v][0]] = X.labels[v]
    for p, v in E.nondeg(0):
        labels[cocone["C"].assignment[(p, v)][0]] = p
    out = StratSSet(V, X.base, labels, name=V.name)
    return out, StratMap(X, out, cocone["B"])


# -- fibrant replacement without touching strata -----------------------------------------

def unfilled_nv_horns(X: StratSSet, n: int, budget=None) -> list:
    """All unfilled non-vertical inner horns of dimension ``n``, in a deterministic order."""
    out = []
    for k in range(1, n):
        for labels, h in horn_failures(X, n, k, lambda lab: len(set(lab)) > 1, budget, first_only=False):
            key = (canon_key(tuple(h.assignment[s] for s in h.source.nondeg())), k)
            out.append((key, k, labels, h))
    out.sort(key=lambda t: t[0])
    return [(k, labels, h) for _, k, labels, h in out]


def fibrant_replace_nv(X: StratSSet, max_dim: int = 3, max_stages: int = 64, budget=None):
    """Attach fillers for unfilled ``IH_P^nv`` horns, lowest dimension first.

    Returns ``(X̃, certificate)``; ``certificate.saturated`` tells whether the
    procedure stopped because no such horn of dimension ``<= max_dim`` remains.
    """
    from .anodyne import CellCertificate, Step, attach_horn

    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 10**6)
    cur = X
    steps = []
    saturated = False
    while True:
        found = None
        for n in range(2, max_dim + 1):
            if not cur.total.known(n):
                break
            horns = unfilled_nv_horns(cur, n, budget)
            if horns:
                found = (n,) + horns[0]
                break
        if found is None:
            saturated = True
            break
        if len(steps) >= max_stages:
            break
        n, k, labels, h = found
        attach = {s: h.assignment[s] for s in h.source.nondeg()}
        step = Step(n, k, tuple(labels), attach)
        cur = attach_horn(cur, step, len(steps))
        steps.append(step)
    cert = CellCertificate(X, steps, cur, kind="IH_P_nv")
    cert.saturated = saturated
    return cur, cert


def strata_isomorphic(X: StratSSet, Y: StratSSet, p) -> bool:
    return iso_check(stratum(X, p), stratum(Y, p)) is not None
