"""Simplicial sets of maps out of cosimplicial objects: mapping spaces and Ex."""

from __future__ import annotations

from .._util import Budget, canon_key
from ..poset import Poset, subdivision
from .constructions import poset_nerve, product, product_nf, simplex
from .core import SimplicialMap, SimplicialSet, identity_map
from .ops import chain_nf, codegeneracy, coface, compose, identity
from .search import MapSearch, search_order


def simplex_map(theta, m: int, n: int, src=None, tgt=None) -> SimplicialMap:
    """The map ``Δ^m -> Δ^n`` induced by the monotone map ``theta``."""
    src = src or simplex(m)
    tgt = tgt or simplex(n)
    asg = {t: chain_nf(tuple(theta[v] for v in t)) for t in src.nondeg()}
    return SimplicialMap(src, tgt, asg, validate=False)


def precompose(f: SimplicialMap, phi: SimplicialMap) -> SimplicialMap:
    """``f o phi``."""
    return SimplicialMap(phi.source, f.target, {s: f(phi.assignment[s]) for s in phi.source.nondeg()}, validate=False)


class CosimplicialObject:
    """Levels ``D(n)`` with coface and codegeneracy maps, built lazily."""

    def __init__(self, level, coface_map, codeg_map):
        self._level = level
        self._coface = coface_map
        self._codeg = codeg_map
        self._cache = {}

    def level(self, n):
        key = ("L", n)
        if key not in self._cache:
            self._cache[key] = self._level(n)
        return self._cache[key]

    def coface(self, n, i):
        key = ("d", n, i)
        if key not in self._cache:
            self._cache[key] = self._coface(n, i)
        return self._cache[key]

    def codeg(self, n, j):
        key = ("s", n, j)
        if key not in self._cache:
            self._cache[key] = self._codeg(n, j)
        return self._cache[key]


class HomSet(SimplicialSet):
    """A simplicial set of maps ``D(n) -> X``, remembering the maps themselves.

    ``points[sid]`` is the map named by a nondegenerate simplex, and
    ``nf_of_key[n]`` sends the key of any map ``D(n) -> X`` to its normal form.
    """

    points: dict
    nf_of_key: dict


def cosimplicial_hom(
    D: CosimplicialObject,
    X: SimplicialSet,
    max_dim: int,
    allowed=None,
    budget_limit: int = 10**6,
    name=None,
    tag="m",
    cosk=None,
):
    levels, nf_of_key, points = {}, {}, {}
    data = {}
    for n in range(max_dim + 1):
        Dn = D.level(n)
        pred = allowed(n) if allowed is not None else None
        budget = Budget(budget_limit, f"maps at level {n}")
        maps = list(MapSearch(Dn, X, allowed=pred, budget=budget, order=search_order(Dn)))
        maps.sort(key=lambda f: _key_sort(f))
        nf_of_key[n] = {}
        count = 0
        for f in maps:
            key = f.key()
            nf = None
            for j in range(n):
                g = precompose(f, D.coface(n, j))
                back = precompose(g, D.codeg(n - 1, j))
                if back.key() == key:
                    sid, eta = nf_of_key[n - 1][g.key()]
                    nf = (sid, compose(eta, codegeneracy(n - 1, j)))
                    break
            if nf is None:
                sid = (tag, n, count)
                count += 1
                points[sid] = f
                faces = ()
                if n > 0:
                    faces = tuple(nf_of_key[n - 1][precompose(f, D.coface(n, i)).key()] for i in range(n + 1))
                data[sid] = (n, faces)
                nf = (sid, identity(n))
            nf_of_key[n][key] = nf
        levels[n] = maps
    out = SimplicialSet(data, max_dim, complete=False, name=name, cosk=cosk, validate=False)
    out.__class__ = HomSet
    out.points = points
    out.nf_of_key = nf_of_key
    out.levels = levels
    out.cosimplicial = D
    out.codomain = X
    return out


def _key_sort(f):
    return canon_key(f.key())


def lookup(H: HomSet, f: SimplicialMap, n: int):
    """Normal form in ``H`` of a map out of ``D(n)``."""
    return H.nf_of_key[n][f.key()]


# -- mapping spaces -------------------------------------------------------------

def product_cosimplicial(A: SimplicialSet) -> CosimplicialObject:
    """``n -> A × Δ^n``."""

    def level(n):
        return product(A, simplex(n), name=f"{A.name}xD{n}")

    def face_map(n, i):
        src, tgt = D.level(n - 1), D.level(n)
        th = coface(n, i)
        asg = {}
        for sid in src.nondeg():
            a, t = sid
            t2 = chain_nf(tuple(th[t[0][e]] for e in t[1]))
            asg[sid] = product_nf(a, t2)
        return SimplicialMap(src, tgt, asg, validate=False)

    def degen_map(n, j):
        src, tgt = D.level(n + 1), D.level(n)
        th = codegeneracy(n, j)
        asg = {}
        for sid in src.nondeg():
            a, t = sid
            t2 = chain_nf(tuple(th[t[0][e]] for e in t[1]))
            asg[sid] = product_nf(a, t2)
        return SimplicialMap(src, tgt, asg, validate=False)

    D = CosimplicialObject(level, face_map, degen_map)
    return D


def mapping_space(A: SimplicialSet, X: SimplicialSet, max_dim: int, budget_limit=10**6, name=None, allowed=None):
    """``Map(A, X)`` up to dimension ``max_dim``."""
    D = product_cosimplicial(A)
    return cosimplicial_hom(
        D, X, max_dim, allowed=allowed, budget_limit=budget_limit, name=name, cosk=X.cosk
    )


# -- Ex --------------------------------------------------------------------------

def _int_chain(n: int) -> Poset:
    return Poset(range(n + 1), [(i, i + 1) for i in range(n)], name=f"[{n}]")


def sd_simplex(n: int) -> SimplicialSet:
    """Nerve of the poset of nonempty faces of Δ^n."""
    return poset_nerve(subdivision(_int_chain(n)), name=f"sdD{n}")


def sd_map(theta, m: int, n: int, src=None, tgt=None) -> SimplicialMap:
    src = src or sd_simplex(m)
    tgt = tgt or sd_simplex(n)
    asg = {}
    for chain in src.nondeg():
        imgs = tuple(tuple(sorted({theta[v] for v in S})) for S in chain)
        asg[chain] = chain_nf(imgs)
    return SimplicialMap(src, tgt, asg, validate=False)


def last_vertex_map(n: int, src=None) -> SimplicialMap:
    src = src or sd_simplex(n)
    asg = {chain: chain_nf(tuple(S[-1] for S in chain)) for chain in src.nondeg()}
    return SimplicialMap(src, simplex(n), asg, validate=False)


def sd_cosimplicial() -> CosimplicialObject:
    D = None

    def level(n):
        return sd_simplex(n)

    def face_map(n, i):
        return sd_map(coface(n, i), n - 1, n, D.level(n - 1), D.level(n))

    def degen_map(n, j):
        return sd_map(codegeneracy(n, j), n + 1, n, D.level(n + 1), D.level(n))

    D = CosimplicialObject(level, face_map, degen_map)
    return D


_SD = sd_cosimplicial()


def ex(X: SimplicialSet, iterations: int = 1, max_dim: int | None = None, budget_limit=10**6, name=None):
    """``Ex^m(X)`` up to ``max_dim`` together with the last-vertex inclusion ``X -> Ex^m(X)``.

    ``max_dim`` defaults to ``dim X + 1`` for complete ``X`` and to the
    truncation otherwise.
    """
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    if max_dim is None:
        # One dimension above the data so that homology through dim X is determined.
        max_dim = X.dim + 1 if X.complete else X.trunc_dim
    current, incl = X, identity_map(X)
    for it in range(iterations):
        E = cosimplicial_hom(_SD, current, max_dim, budget_limit=budget_limit, name=name, tag=f"ex{it + 1}")
        step = _ex_inclusion(current, E, max_dim)
        incl = incl.then(step)
        current = E
    if iterations == 0:
        return X, incl
    return current, incl


def _ex_inclusion(X: SimplicialSet, E: HomSet, max_dim: int) -> SimplicialMap:
    asg = {}
    for sid in X.nondeg():
        n = X.dim_of(sid)
        if n > max_dim:
            raise ValueError("X has simplices above the requested dimension of Ex")
        lam = last_vertex_map(n, _SD.level(n))
        xnf = X.nf(sid)
        vals = {}
        for chain in _SD.level(n).nondeg():
            t, eta = lam.assignment[chain]
            vals[chain] = X.apply(xnf, tuple(t[e] for e in eta))
        f = SimplicialMap(_SD.level(n), X, vals, validate=False)
        asg[sid] = E.nf_of_key[n][f.key()]
    return SimplicialMap(X, E, asg, validate=False)
