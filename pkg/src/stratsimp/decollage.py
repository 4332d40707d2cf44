"""Presheaves on sd(P)^op: the nerve N_P, its left adjoint L_P and Segal checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ._util import canon_key, csorted, ident
from .homotopy import Verdict, combine, equivalent, weak_equiv_verdict
from .poset import Poset, pair_poset, pair_sigma
from .simplicial import (
    SimplicialMap,
    SimplicialSet,
    chain_nf,
    colimit,
    disjoint_union,
    empty_set,
    fiber_product,
    identity_map,
    iso_check,
    product,
    product_nf,
    simplex,
)
from .simplicial.hom import lookup
from .stratified import StratSSet, rel_mapping_space, string_object


def _fmt_string(s) -> str:
    return "{" + "<".join(map(str, s)) + "}"


class Presheaf:
    """A functor sd(P)^op -> sSet given by values and restriction maps.

    ``restrictions[(S, T)]`` is the map ``values[S] -> values[T]`` for a
    proper substring ``T`` of ``S``.
    """

    def __init__(self, base: Poset, values: dict, restrictions: dict, name=None, validate=True):
        self.base = base
        self.values = {base.string(s): X for s, X in values.items()}
        self.restrictions = {(base.string(a), base.string(b)): f for (a, b), f in restrictions.items()}
        self.name = name
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"Presheaf({self.name or '?'} over {self.base.name or '?'})"

    def strings(self) -> list:
        return self.base.strings()

    def restrict(self, S, T) -> SimplicialMap:
        S, T = self.base.string(S), self.base.string(T)
        if S == T:
            return identity_map(self.values[S])
        return self.restrictions[(S, T)]

    def validate(self) -> None:
        strs = self.strings()
        for s in strs:
            if s not in self.values:
                raise ValueError(f"no value at {_fmt_string(s)}")
        for s in strs:
            for t in strs:
                if s != t and set(t) <= set(s):
                    f = self.restrictions.get((s, t))
                    if f is None:
                        raise ValueError(f"no restriction {_fmt_string(s)} -> {_fmt_string(t)}")
                    if f.source is not self.values[s] or f.target is not self.values[t]:
                        raise ValueError(f"restriction {_fmt_string(s)} -> {_fmt_string(t)} has the wrong ends")
        bad = functoriality_failure(self)
        if bad is not None:
            raise ValueError("restrictions are not functorial along " + " > ".join(map(_fmt_string, bad)))

    def restricted(self, sigma) -> "Presheaf":
        """The restriction of the presheaf to strings inside ``sigma``."""
        sigma = self.base.string(sigma)
        Q = self.base.sub(sigma, name=_fmt_string(sigma))
        keep = set(sigma)
        vals = {s: X for s, X in self.values.items() if set(s) <= keep}
        res = {k: f for k, f in self.restrictions.items() if set(k[0]) <= keep}
        return Presheaf(Q, vals, res, name=f"{self.name}|{_fmt_string(sigma)}", validate=False)


def functoriality_failure(F: Presheaf):
    """A triple ``S > T > U`` where restriction is not the composite, or ``None``."""
    strs = F.strings()
    for s in strs:
        for t in strs:
            if t == s or not set(t) < set(s):
                continue
            for u in strs:
                if u == t or not set(u) < set(t):
                    continue
                direct = F.restrict(s, u)
                via = F.restrict(s, t).then(F.restrict(t, u))
                if direct.assignment != via.assignment:
                    return (s, t, u)
    return None


# -- constructions of presheaves ----------------------------------------------

def constant_presheaf(P: Poset, K: SimplicialSet, name=None) -> Presheaf:
    strs = P.strings()
    vals = {s: K for s in strs}
    res = {(s, t): identity_map(K) for s in strs for t in strs if s != t and set(t) <= set(s)}
    return Presheaf(P, vals, res, name=name or f"const_{K.name}")


def representable(P: Poset, sigma, name=None) -> Presheaf:
    """``sd(P)(-, Σ)``: a point on substrings of Σ, empty elsewhere."""
    sigma = P.string(sigma)
    pt = simplex(0)
    empty = empty_set()
    strs = P.strings()
    vals = {s: (pt if set(s) <= set(sigma) else empty) for s in strs}
    res = {}
    for s in strs:
        for t in strs:
            if s != t and set(t) <= set(s):
                res[(s, t)] = SimplicialMap(vals[s], vals[t], {v: vals[t].nf(v) for v in vals[s].nondeg()})
    return Presheaf(P, vals, res, name=name or f"y{_fmt_string(sigma)}")


def perturbed_constant(P: Poset, sigma, name=None) -> Presheaf:
    """Constant at a point except empty at ``sigma`` (which must be maximal)."""
    sigma = P.string(sigma)
    pt, empty = simplex(0), empty_set()
    strs = P.strings()
    if any(set(sigma) < set(s) for s in strs):
        raise ValueError(f"{_fmt_string(sigma)} is not a maximal string")
    vals = {s: (empty if s == sigma else pt) for s in strs}
    res = {}
    for s in strs:
        for t in strs:
            if s != t and set(t) <= set(s):
                res[(s, t)] = SimplicialMap(vals[s], vals[t], {v: vals[t].nf(v) for v in vals[s].nondeg()})
    return Presheaf(P, vals, res, name=name or f"const_minus{_fmt_string(sigma)}")


def _string_inclusion(small, big) -> tuple:
    return tuple(big.index(x) for x in small)


def _reindex(nf, theta):
    """Image of a simplex of ``Δ^m`` (vertex tuples as ids) under ``theta``."""
    return chain_nf(tuple(theta[nf[0][e]] for e in nf[1]))


def _is_id(eta, d) -> bool:
    return tuple(eta) == tuple(range(d + 1))


def _operator(nf) -> tuple:
    """Vertex sequence of a simplex of a standard simplex."""
    return tuple(nf[0][e] for e in nf[1])


def nerve_presheaf(X: StratSSet, max_dim: int, budget_limit=10**6) -> Presheaf:
    """``Σ -> Map_{/P}(Σ, X)`` with restriction by precomposition."""
    P = X.base
    strs = P.strings()
    vals = {s: rel_mapping_space(string_object(P, s), X, max_dim, budget_limit, name=f"N{_fmt_string(s)}")
            for s in strs}
    res = {}
    for s in strs:
        for t in strs:
            if s != t and set(t) <= set(s):
                res[(s, t)] = _precompose_strings(vals[s], vals[t], _string_inclusion(t, s))
    return Presheaf(P, vals, res, name=f"N_P({X.name})")


def _precompose_strings(Hs, Ht, theta) -> SimplicialMap:
    asg = {}
    for sid in Hs.nondeg():
        n = Hs.dim_of(sid)
        f = Hs.points[sid]
        src = Ht.cosimplicial.level(n)
        g = {a: f(product_nf(_reindex(a[0], theta), a[1])) for a in src.nondeg()}
        asg[sid] = lookup(Ht, SimplicialMap(src, f.target, g, validate=False), n)
    return SimplicialMap(Hs, Ht, asg, validate=False)


# -- the left adjoint ---------------------------------------------------------

@dataclass
class Extension:
    """``L_P(F)`` together with the canonical maps from its pieces.

    ``pieces[(S, S')]`` is the product ``Δ^{S'} × F(S)`` and ``cocone`` holds
    the maps of those pieces into ``obj.total``.
    """

    obj: StratSSet
    pieces: dict
    cocone: dict
    strategy: str


def _piece(F: Presheaf, S, S1) -> SimplicialSet:
    return product(simplex(len(S1) - 1), F.values[S], name=f"{_fmt_string(S1)}x{F.name}{_fmt_string(S)}")


def _piece_map(F: Presheaf, src, tgt, A, B) -> SimplicialMap:
    """``(S, S') <= (T, T')`` induces ``Δ^{S'} × F(S) -> Δ^{T'} × F(T)``."""
    (S, S1), (T, T1) = src, tgt
    theta = _string_inclusion(S1, T1)
    r = F.restrict(S, T)
    asg = {sid: product_nf(_reindex(sid[0], theta), r(sid[1])) for sid in A.nondeg()}
    return SimplicialMap(A, B, asg, validate=False)


def _labels_from_cocone(P, pieces, cocone, colim) -> dict:
    labels = {}
    for key, A in pieces.items():
        S1 = key[1]
        for v in A.nondeg(0):
            w = cocone[key].assignment[v][0]
            lab = S1[v[0][0][0]]
            if labels.setdefault(w, lab) != lab:
                raise AssertionError("colimit identified vertices with different labels")
    return labels


def lkan(F: Presheaf, strategy: str = "pair_colimit", name=None) -> Extension:
    """``L_P(F)`` as a colimit over Pair(P) or as a coequalizer of coproducts."""
    if strategy == "pair_colimit":
        return _lkan_pairs(F, name)
    if strategy == "coend":
        return _lkan_coend(F, name)
    raise ValueError(f"unknown strategy {strategy!r}")


def _lkan_pairs(F: Presheaf, name) -> Extension:
    P = F.base
    Q = pair_poset(P)
    pieces = {e: _piece(F, *e) for e in Q.elements}
    maps = [(a, b, _piece_map(F, a, b, pieces[a], pieces[b])) for a, b in Q.covers()]
    order = sorted(pieces, key=lambda e: (-len(e[1]), canon_key(e)))
    colim, cocone = colimit(pieces, maps, name=name or f"L({F.name})", order=order)
    labels = _labels_from_cocone(P, pieces, cocone, colim)
    return Extension(StratSSet(colim, P, labels, name=colim.name), pieces, cocone, "pair_colimit")


def _lkan_coend(F: Presheaf, name) -> Extension:
    """Coequalizer of ``⨿_{T ⊂ S} Δ^T × F(S) ⇉ ⨿_S Δ^S × F(S)``."""
    P = F.base
    strs = P.strings()
    diag = [(s, s) for s in strs]
    off = [(s, t) for s in strs for t in strs if s != t and set(t) <= set(s)]
    pieces = {e: _piece(F, *e) for e in diag + off}
    B = disjoint_union([(e, pieces[e]) for e in diag], name="coend_B")
    A = disjoint_union([(e, pieces[e]) for e in off], name="coend_A")
    left, right = {}, {}
    for (S, T) in off:
        to_big = _piece_map(F, (S, T), (S, S), pieces[(S, T)], pieces[(S, S)])
        to_res = _piece_map(F, (S, T), (T, T), pieces[(S, T)], pieces[(T, T)])
        for sid in pieces[(S, T)].nondeg():
            a = ((S, T), sid)
            x, e = to_big.assignment[sid]
            left[a] = (((S, S), x), e)
            y, e2 = to_res.assignment[sid]
            right[a] = (((T, T), y), e2)
    f = SimplicialMap(A, B, left, validate=False)
    g = SimplicialMap(A, B, right, validate=False)
    colim, cc = colimit({"A": A, "B": B}, [("A", "B", f), ("A", "B", g)],
                        name=name or f"L({F.name})", order=["B", "A"], naming=lambda key, sid: sid)
    cocone = {}
    for e in diag:
        asg = {sid: cc["B"].assignment[(e, sid)] for sid in pieces[e].nondeg()}
        cocone[e] = SimplicialMap(pieces[e], colim, asg, validate=False)
    for e in off:
        cocone[e] = _piece_map(F, e, (e[0], e[0]), pieces[e], pieces[(e[0], e[0])]).then(cocone[(e[0], e[0])])
    labels = _labels_from_cocone(P, pieces, cocone, colim)
    return Extension(StratSSet(colim, P, labels, name=colim.name), pieces, cocone, "coend")


def strat_iso(X: StratSSet, Y: StratSSet):
    """An isomorphism over the base, or ``None``."""
    return iso_check(X.total, Y.total, labels=(X.labels, Y.labels))


def compare_strategies(F: Presheaf):
    """Both computations of ``L_P(F)`` and an isomorphism between them (or ``None``)."""
    a, b = lkan(F, "pair_colimit"), lkan(F, "coend")
    return a, b, strat_iso(a.obj, b.obj)


# -- unit and counit ----------------------------------------------------------

def _truncate(X: SimplicialSet, n: int) -> SimplicialSet:
    return X if X.dim <= n else X.truncated(n)


def unit_component(F: Presheaf, L: Extension, S, H) -> SimplicialMap:
    """``η_S : F(S) -> Map_{/P}(S, L_P F)`` where ``H`` is the target mapping space."""
    src = _truncate(F.values[S], H.trunc_dim)
    cc = L.cocone[(S, S)]
    FS = F.values[S]
    asg = {}
    for y in src.nondeg():
        n = src.dim_of(y)
        lvl = H.cosimplicial.level(n)
        ynf = FS.nf(y)
        g = {a: cc(product_nf(a[0], FS.apply(ynf, _operator(a[1])))) for a in lvl.nondeg()}
        asg[y] = lookup(H, SimplicialMap(lvl, L.obj.total, g, validate=False), n)
    return SimplicialMap(src, H, asg, validate=False)


def _evaluate(H, hnf, S, S1, xnf):
    """Evaluate the map named by ``hnf`` in ``Map_{/P}(Δ^S, X)`` on ``(Δ^{S1} ⊂ Δ^S)(x)``."""
    hsid, eta = hnf
    f = H.points[hsid]
    theta = _string_inclusion(S1, S)
    return f(product_nf(_reindex(xnf, theta), chain_nf(eta)))


def counit(X: StratSSet, NX: Presheaf, L: Extension) -> SimplicialMap:
    """``ε_X : L_P N_P X -> X`` assembled from its values on pieces.

    Raises ``AssertionError`` if the piecewise values do not glue.
    """
    asg = {}
    C = L.obj.total
    for key, A in L.pieces.items():
        S, S1 = key
        H = NX.values[S]
        for sid in A.nondeg():
            val = _evaluate(H, sid[1], S, S1, sid[0])
            r, e = L.cocone[key].assignment[sid]
            if _is_id(e, A.dim_of(sid)):
                if asg.setdefault(r, val) != val:
                    raise AssertionError(f"counit does not glue at {ident(r)}")
    missing = [r for r in C.nondeg() if r not in asg]
    if missing:
        raise AssertionError("counit undefined on " + ident(missing[0]))
    eps = SimplicialMap(C, X.total, asg)
    # Every atom, degenerate image or not, must agree with the glued map.
    for key, A in L.pieces.items():
        S, S1 = key
        H = NX.values[S]
        for sid in A.nondeg():
            val = _evaluate(H, sid[1], S, S1, sid[0])
            if eps(L.cocone[key].assignment[sid]) != val:
                raise AssertionError(f"counit does not glue on piece {key!r}")
    return eps


@dataclass
class AdjunctionReport:
    unit: dict
    counit: SimplicialMap
    unit_natural: bool
    triangle_left: bool
    triangle_right: bool
    unit_iso: dict
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.unit_natural and self.triangle_left and self.triangle_right


def adjunction_check(F: Presheaf, X: StratSSet, max_dim: int, budget_limit=10**6) -> AdjunctionReport:
    """Build ``η_F`` and ``ε_X`` and check naturality and both triangle identities.

    The maps ``L(η_F)`` and ``N(ε_X)`` are evaluated piece by piece; the
    pieces of a colimit are jointly surjective, so agreement on every piece
    is agreement of maps.
    """
    P = F.base
    failures = []
    LF = lkan(F)
    NLF = nerve_presheaf(LF.obj, max_dim, budget_limit)
    unit = {S: unit_component(F, LF, S, NLF.values[S]) for S in P.strings()}
    natural = True
    for (S, T), r in F.restrictions.items():
        src = unit[S].source
        for y in src.nondeg():
            a = NLF.restrict(S, T)(unit[S].assignment[y])
            b = unit[T](r(F.values[S].nf(y)))
            if a != b:
                natural = False
                failures.append(f"unit not natural at {_fmt_string(S)} -> {_fmt_string(T)} on {ident(y)}")
                break
    # ε_{LF} ∘ L(η_F) = id on every piece atom of L_P F.
    left = True
    for key, A in LF.pieces.items():
        S, S1 = key
        H = NLF.values[S]
        for sid in A.nondeg():
            if A.dim_of(sid) > max_dim:
                continue
            eta_y = unit[S](sid[1])
            got = _evaluate(H, eta_y, S, S1, sid[0])
            if got != LF.cocone[key].assignment[sid]:
                left = False
                failures.append(f"left triangle fails on piece {key!r} at {ident(sid)}")
                break
    # N(ε_X) ∘ η_{N X} = id on every simplex of N_P X.
    NX = nerve_presheaf(X, max_dim, budget_limit)
    LNX = lkan(NX)
    eps = counit(X, NX, LNX)
    right = True
    for S in P.strings():
        H = NX.values[S]
        for h in H.nondeg():
            n = H.dim_of(h)
            lvl = H.cosimplicial.level(n)
            hnf = H.nf(h)
            cc = LNX.cocone[(S, S)]
            for a in (s for s in lvl.nondeg() if lvl.dim_of(s) <= max_dim):
                through = eps(cc(product_nf(a[0], H.apply(hnf, _operator(a[1])))))
                if through != H.points[h](lvl.nf(a)):
                    right = False
                    break
            if not right:
                failures.append(f"right triangle fails at {_fmt_string(S)} on {ident(h)}")
                break
    unit_iso = {S: unit[S].is_iso() for S in P.strings()}
    return AdjunctionReport(unit, eps, natural, left, right, unit_iso, failures)


# -- Segal maps -----------------------------------------------------------------

def _second(nf):
    """Second coordinate of a product simplex in normal form."""
    (sx, sy), eta = nf
    return (sy[0], tuple(sy[1][e] for e in eta))


def segal_map(F: Presheaf, sigma, max_dim: int, budget=None):
    """``F(p_0<...<p_m) -> F(p_0<p_1) ×_{F(p_1)} ... ×_{F(p_{m-1})} F(p_{m-1}<p_m)``.

    The fiber product is associated from the left.  Returns the map and a
    Verdict on whether it is a weak equivalence.
    """
    P = F.base
    sigma = P.string(sigma)
    m = len(sigma) - 1
    src = _truncate(F.values[sigma], max_dim)
    if m <= 1:
        f = identity_map(src)
        return f, equivalent("iso", recheck=lambda: f.is_iso(), note="segal map is the identity")
    edges = [(sigma[i], sigma[i + 1]) for i in range(m)]
    Z = _truncate(F.values[edges[0]], max_dim)
    to_last = identity_map(Z)  # Z -> F(edge) of the last factor
    for i in range(1, m):
        p = (sigma[i],)
        E = _truncate(F.values[edges[i]], max_dim)
        a = to_last.then(_trunc_map(F.restrict(edges[i - 1], p), to_last.target, max_dim))
        b = _trunc_map(F.restrict(edges[i], p), E, max_dim)
        Z = fiber_product(a, b, name=f"segal{i}")
        to_last = SimplicialMap(Z, E, {s: _second(Z.nf(s)) for s in Z.nondeg()}, validate=False)
    asg = {}
    for y in src.nondeg():
        ynf = F.values[sigma].nf(y)
        parts = [F.restrict(sigma, e)(ynf) for e in edges]
        acc = parts[0]
        for q in parts[1:]:
            acc = product_nf(acc, q)
        asg[y] = acc
    f = SimplicialMap(src, Z, asg)
    return f, weak_equiv_verdict(f, budget, max_dim=max_dim)


def _trunc_map(f: SimplicialMap, src: SimplicialSet, max_dim: int) -> SimplicialMap:
    tgt = _truncate(f.target, max_dim)
    return SimplicialMap(src, tgt, {s: f.assignment[s] for s in src.nondeg()}, validate=False)


def is_decollage(F: Presheaf, max_dim: int, budget=None) -> Verdict:
    """Segal condition on every string with at least three elements."""
    comps = []
    for s in F.strings():
        if len(s) < 3:
            continue
        _, v = segal_map(F, s, max_dim, budget)
        comps.append((_fmt_string(s), v))
    if not comps:
        return equivalent("vacuous", recheck=lambda: True, note="no strings of length three or more")
    return combine(comps, kind="decollage")


# -- base change -----------------------------------------------------------------

@dataclass
class BaseChange:
    sigma: tuple
    pullback: StratSSet
    restricted: StratSSet
    forward: SimplicialMap
    backward: SimplicialMap

    def verify(self) -> bool:
        f, g = self.forward, self.backward
        f.validate()
        g.validate()
        ident_a = all(g(f.assignment[s]) == f.source.nf(s) for s in f.source.nondeg())
        ident_b = all(f(g.assignment[s]) == g.source.nf(s) for s in g.source.nondeg())
        labels = all(self.restricted.labels[v] == self.pullback.labels[f.assignment[v][0]]
                     for v in f.source.nondeg(0))
        return ident_a and ident_b and labels


def base_change_iso(F: Presheaf, sigma) -> BaseChange:
    """The isomorphism ``Σ ×_P L_P(F) ≅ L_Σ(F|Σ)`` with both directions explicit.

    The backward map sends a piece ``(S, S')`` of the pullback to the piece
    ``(S ∩ Σ, S')`` of the restricted extension, as dictated by the
    reflection of Pair_Σ(P) onto Pair(Σ).  Raises ``RuntimeError`` if the
    maps fail to be mutually inverse.
    """
    P = F.base
    sigma = P.string(sigma)
    L = lkan(F)
    keep = set(sigma)
    T = L.obj.total
    sids = [s for s in T.nondeg() if all(L.obj.labels[v] in keep for v in T.vertices(T.nf(s)))]
    pull = T.subobject(sids, name=f"{_fmt_string(sigma)}x{T.name}")
    pull_s = StratSSet(pull, P, {v: L.obj.labels[v] for v in pull.nondeg(0)}, name=pull.name)
    Fr = F.restricted(sigma)
    R = lkan(Fr)
    # Forward: each piece of L_Σ is a piece of L_P.
    fwd = {}
    for key, A in R.pieces.items():
        for sid in A.nondeg():
            r, e = R.cocone[key].assignment[sid]
            if _is_id(e, A.dim_of(sid)):
                fwd.setdefault(r, L.cocone[key].assignment[sid])
    forward = SimplicialMap(R.obj.total, pull, fwd, validate=False)
    # Backward through the reflection (S, S'') -> (S ∩ Σ, S'').
    _, refl = pair_sigma(P, sigma)
    back = {}
    for key, A in L.pieces.items():
        S, S1 = key
        for sid in A.nondeg():
            r, e = L.cocone[key].assignment[sid]
            if r not in pull or r in back:
                continue
            if not _is_id(e, A.dim_of(sid)):
                continue
            xs = _operator(sid[0])
            S2 = P.string({S1[i] for i in xs})
            (adjS, adjS1), _ = refl[(S, S2)]
            x2 = chain_nf(tuple(S2.index(S1[i]) for i in xs))
            y2 = F.restrict(S, adjS)(sid[1])
            back[r] = R.cocone[(adjS, adjS1)](product_nf(x2, y2))
    backward = SimplicialMap(pull, R.obj.total, back, validate=False)
    bc = BaseChange(sigma, pull_s, R.obj, forward, backward)
    try:
        ok = bc.verify()
    except (ValueError, KeyError) as exc:
        raise RuntimeError(f"base change maps are not simplicial over {_fmt_string(sigma)}: {exc}") from exc
    if not ok:
        raise RuntimeError(f"base change maps are not inverse over {_fmt_string(sigma)}")
    return bc


# -- monomorphisms -----------------------------------------------------------------

def set_colimit(I: Poset, sets: dict, maps: dict):
    """Colimit of a diagram of finite sets over ``I`` by union-find.

    ``maps[(i, j)]`` is a dict for each covering relation ``i < j``.
    Returns ``{i: {x: class}}``, the canonical maps to the classes.
    """
    parent = {(i, x): (i, x) for i in I.elements for x in sets[i]}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j), f in maps.items():
        for x in sets[i]:
            ra, rb = find((i, x)), find((j, f[x]))
            if ra != rb:
                lo, hi = csorted([ra, rb])
                parent[hi] = lo
    return {i: {x: find((i, x)) for x in sets[i]} for i in I.elements}


def random_mono_diagram(I: Poset, rng: random.Random, max_size: int = 4):
    """A random functor ``I -> Set`` all of whose maps are injective.

    Each element gets fresh points, and every element also contains the
    images of everything below it, which keeps the maps injective and
    composable.
    """
    sets = {}
    below = {i: [j for j in I.elements if I.lt(j, i)] for i in I.elements}
    order = sorted(I.elements, key=lambda i: (len(below[i]), canon_key(i)))
    for i in order:
        own = [(i, t) for t in range(rng.randint(0, max_size))]
        inherited = set()
        for j in below[i]:
            inherited |= set(sets[j])
        sets[i] = csorted(inherited | set(own))
    maps = {(i, j): {x: x for x in sets[i]} for i, j in I.covers()}
    # Relabel every set by a random permutation so the maps are not inclusions.
    perm = {}
    for i in I.elements:
        xs = list(sets[i])
        ys = list(range(len(xs)))
        rng.shuffle(ys)
        perm[i] = dict(zip(xs, ys))
    sets2 = {i: csorted(perm[i].values()) for i in I.elements}
    maps2 = {(i, j): {perm[i][x]: perm[j][f[x]] for x in f} for (i, j), f in maps.items()}
    return sets2, maps2


def mono_colimit_check(I: Poset, sets: dict, maps: dict) -> bool:
    """Every leg of the colimit cocone of a mono diagram of sets is injective."""
    if not all(len(set(f.values())) == len(f) for f in maps.values()):
        raise ValueError("diagram is not a diagram of injections")
    legs = set_colimit(I, sets, maps)
    return all(len(set(leg.values())) == len(leg) for leg in legs.values())


@dataclass
class MonoReport:
    all_mono: bool
    non_mono: list
    legs_injective: bool | None
    non_injective_legs: list
    set_trials: int
    set_failures: int

    @property
    def ok(self) -> bool:
        return self.all_mono and bool(self.legs_injective) and self.set_failures == 0


def mono_pushforward_check(F: Presheaf, trials: int = 20, seed: int = 0) -> MonoReport:
    """Injectivity of restrictions, of the pieces into ``L_P(F)``, and the set-level lemma."""
    non_mono = [f"{_fmt_string(s)} -> {_fmt_string(t)}"
                for (s, t), f in sorted(F.restrictions.items(), key=lambda kv: canon_key(kv[0]))
                if not f.is_injective()]
    legs, bad = None, []
    if not non_mono:
        L = lkan(F)
        bad = [f"{_fmt_string(k[1])} x F{_fmt_string(k[0])}"
               for k in csorted(L.pieces) if not L.cocone[k].is_injective()]
        legs = not bad
    rng = random.Random(seed)
    fails = 0
    from .poset import all_posets

    shapes = [Q for n in (1, 2, 3) for Q in all_posets(n)]
    for _ in range(trials):
        Q = shapes[rng.randrange(len(shapes))]
        sets, maps = random_mono_diagram(Q, rng)
        if not mono_colimit_check(Q, sets, maps):
            fails += 1
    return MonoReport(not non_mono, non_mono, legs, bad, trials, fails)
