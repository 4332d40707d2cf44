"""Standard simplicial sets, poset nerves, products, fiber products and colimits."""

from __future__ import annotations

from itertools import combinations

from .._util import canon_key, csorted
from .core import SimplicialMap, SimplicialSet
from .ops import coface, compose, epi_mono, identity, is_identity, repeats, sections, surjection_from_repeats, surjections


# -- standard simplices and their subobjects ----------------------------------

def _faces_of_tuple(t):
    if len(t) == 1:
        return ()
    out = []
    for i in range(len(t)):
        f = t[:i] + t[i + 1:]
        out.append((f, identity(len(f) - 1)))
    return tuple(out)


def simplex_subcomplex(n: int, tops, name=None, labels=None) -> SimplicialSet:
    """The simplicial subset of ``Δ^n`` generated by the given vertex tuples."""
    keep = set()
    for t in tops:
        t = tuple(t)
        for r in range(1, len(t) + 1):
            keep.update(combinations(t, r))
    data = {t: (len(t) - 1, _faces_of_tuple(t)) for t in keep}
    return SimplicialSet(data, n, complete=True, name=name)


def make_generator(kind: str, n: int, k: int | None = None) -> SimplicialSet:
    """``simplex``, ``boundary``, ``horn`` (needs ``k``) or ``spine`` as a subobject of Δ^n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    full = tuple(range(n + 1))
    if kind == "simplex":
        return simplex_subcomplex(n, [full], name=f"D{n}")
    if kind == "boundary":
        tops = [full[:i] + full[i + 1:] for i in range(n + 1)] if n > 0 else []
        return simplex_subcomplex(n, tops, name=f"dD{n}")
    if kind == "horn":
        if k is None or not 0 <= k <= n or n < 1:
            raise ValueError(f"horn index k={k} out of range for n={n}")
        tops = [full[:i] + full[i + 1:] for i in range(n + 1) if i != k]
        return simplex_subcomplex(n, tops, name=f"L{n}_{k}")
    if kind == "spine":
        if n < 1:
            raise ValueError("spine needs n >= 1")
        return simplex_subcomplex(n, [(i, i + 1) for i in range(n)], name=f"Spn{n}")
    raise ValueError(f"unknown generator kind {kind!r}")


def simplex(n: int) -> SimplicialSet:
    return make_generator("simplex", n)


def poset_nerve(P, name=None) -> SimplicialSet:
    """Nerve of a poset; simplex ids are its strings."""
    data = {}
    for s in P.strings():
        data[s] = (len(s) - 1, _faces_of_tuple(s))
    return SimplicialSet(data, 0, complete=True, name=name or P.name, cosk=2)


# -- products -------------------------------------------------------------------

def normalize_pair(x, y):
    """Split a pair of ``n``-simplices into a jointly nondegenerate pair and a degeneracy."""
    common = set(repeats(x[1])) & set(repeats(y[1]))
    n = len(x[1]) - 1
    if not common:
        return (x, y), identity(n)
    gamma = surjection_from_repeats(n, common)
    keep = [min(j for j in range(n + 1) if gamma[j] == v) for v in range(gamma[-1] + 1)]
    x2 = (x[0], tuple(x[1][j] for j in keep))
    y2 = (y[0], tuple(y[1][j] for j in keep))
    return (x2, y2), gamma


def product(X: SimplicialSet, Y: SimplicialSet, name=None) -> SimplicialSet:
    """Levelwise product; simplex ids are jointly nondegenerate pairs of normal forms."""
    if X.complete and Y.complete:
        trunc = top = X.dim + Y.dim
        complete = True
    else:
        trunc = min(Z.trunc_dim for Z in (X, Y) if not Z.complete)
        top, complete = trunc, False
    data = {}
    for p in range(X.dim + 1):
        for sx in X.nondeg(p):
            for q in range(Y.dim + 1):
                for sy in Y.nondeg(q):
                    for n in range(max(p, q), min(p + q, top) + 1):
                        for a in surjections(n, p):
                            ra = set(repeats(a))
                            for b in surjections(n, q):
                                if ra & set(repeats(b)):
                                    continue
                                data[((sx, a), (sy, b))] = n
    out = {}
    for sid, n in data.items():
        if n == 0:
            out[sid] = (0, ())
            continue
        x, y = sid
        faces = []
        for i in range(n + 1):
            pair, gamma = normalize_pair(X.face(x, i), Y.face(y, i))
            faces.append((pair, gamma))
        out[sid] = (n, tuple(faces))
    cosk = max(X.cosk, Y.cosk) if X.cosk is not None and Y.cosk is not None else None
    return SimplicialSet(out, trunc, complete=complete, name=name, cosk=cosk, validate=False)


def product_nf(x, y):
    """Normal form in ``product(X, Y)`` of the pair of simplices ``(x, y)``."""
    pair, gamma = normalize_pair(x, y)
    return (pair, gamma)


def projections(X: SimplicialSet, Y: SimplicialSet, XY: SimplicialSet):
    p1 = {s: (s[0][0], s[0][1]) for s in XY.nondeg()}
    p2 = {s: (s[1][0], s[1][1]) for s in XY.nondeg()}
    return SimplicialMap(XY, X, p1, validate=False), SimplicialMap(XY, Y, p2, validate=False)


def product_map(f: SimplicialMap, g: SimplicialMap, src: SimplicialSet, tgt: SimplicialSet) -> SimplicialMap:
    """``f × g`` between given product objects."""
    asg = {}
    for sid in src.nondeg():
        x, y = sid
        asg[sid] = product_nf(f(x), g(y))
    return SimplicialMap(src, tgt, asg, validate=False)


def fiber_product(f: SimplicialMap, g: SimplicialMap, name=None) -> SimplicialSet:
    """``X ×_Z Y`` for ``f : X -> Z`` and ``g : Y -> Z`` as a subobject of the product."""
    XY = product(f.source, g.source)
    keep = [s for s in XY.nondeg() if f(s[0]) == g(s[1])]
    out = XY.subobject(keep, name=name)
    cosk = None
    if f.source.cosk is not None and g.source.cosk is not None and f.target.cosk is not None:
        cosk = max(f.source.cosk, g.source.cosk, f.target.cosk)
    out.cosk = cosk
    return out


def disjoint_union(parts: list, name=None) -> SimplicialSet:
    """Coproduct of ``(key, X)`` pairs; simplex ids become ``(key, sid)``."""
    data = {}
    complete = all(X.complete for _, X in parts)
    trunc = min((X.trunc_dim for _, X in parts if not X.complete), default=0)
    if complete:
        trunc = max((X.dim for _, X in parts), default=0)
    for key, X in parts:
        for sid in X.nondeg():
            faces = tuple(((key, fs), eta) for fs, eta in X.faces(sid))
            data[(key, sid)] = (X.dim_of(sid), faces)
    return SimplicialSet(data, trunc, complete=complete, name=name, validate=False)


# -- colimits --------------------------------------------------------------------

class _Quotient:
    """Union-find over atoms ``(key, sid)`` with degeneracy marks."""

    def __init__(self, objects: dict, order: list):
        self.objects = objects
        self.parent = {}
        self.mark = {}
        self.rank = {}
        for pos, key in enumerate(order):
            for sid in objects[key].nondeg():
                a = (key, sid)
                self.parent[a] = a
                self.rank[a] = (pos, canon_key(sid))
        self.changed = False

    def dim(self, atom) -> int:
        return self.objects[atom[0]].dim_of(atom[1])

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def norm(self, atom, eta):
        while True:
            r = self.find(atom)
            m = self.mark.get(r)
            if m is None:
                return (r, tuple(eta))
            atom, zeta = m
            eta = compose(zeta, eta)

    def lift_nf(self, key, nf):
        return self.norm((key, nf[0]), nf[1])

    def apply_root(self, r, theta):
        """``theta^*`` of the class with unmarked root ``r``."""
        inj, surj = epi_mono(theta)
        key, sid = r
        X = self.objects[key]
        fs, feta = X.face_op(sid, inj)
        root, eta = self.norm((key, fs), feta)
        return (root, compose(eta, surj))

    def face_of(self, atom, i):
        """``d_i`` of an atom, as a normalized class."""
        key, sid = atom
        X = self.objects[key]
        return self.lift_nf(key, X.face(X.nf(sid), i))

    def union(self, r1, r2):
        if self.rank[r2] < self.rank[r1]:
            r1, r2 = r2, r1
        self.parent[r2] = r1
        self.changed = True

    def identify(self, x, y):
        while True:
            x = self.norm(*x)
            y = self.norm(*y)
            if x == y:
                return
            (r1, e1), (r2, e2) = x, y
            if self.dim(r1) > self.dim(r2):
                (r1, e1), (r2, e2) = (r2, e2), (r1, e1)
            done = False
            for s2 in sections(e2):
                theta = compose(e1, s2)
                if is_identity(theta) and len(theta) == self.dim(r2) + 1 and self.dim(r1) == self.dim(r2):
                    if r1 != r2:
                        self.union(r1, r2)
                        done = True
                        break
                    continue
                z = self.apply_root(r1, theta)
                if z == (r2, identity(self.dim(r2))):
                    continue
                self.mark[r2] = z
                self.changed = True
                done = True
                break
            if not done:
                raise AssertionError("colimit identification made no progress")


def colimit(objects: dict, maps: list, name=None, order=None, naming=None):
    """Colimit of a finite diagram.

    ``objects`` maps keys to simplicial sets; ``maps`` lists ``(src, tgt, f)``.
    Returns ``(colim, cocone)`` where ``cocone[key]`` is the canonical map.
    Nondegenerate simplices of the colimit are named ``naming(key, sid)`` for
    the representative atom, by default ``(key, sid)``; representatives are
    the earliest atoms in ``order`` (default: sorted keys).
    """
    order = list(order) if order is not None else csorted(objects)
    trunc_known = [X for X in objects.values() if not X.complete]
    complete = not trunc_known
    trunc = min((X.trunc_dim for X in trunc_known), default=0)
    if complete:
        trunc = max((X.dim for X in objects.values()), default=0)
    Q = _Quotient(objects, order)
    for src, tgt, f in maps:
        for sid in objects[src].nondeg():
            Q.identify(Q.norm((src, sid), identity(objects[src].dim_of(sid))), Q.lift_nf(tgt, f[sid]))
    # Make face data agree across each class until stable.
    atoms = [(key, sid) for key in order for sid in objects[key].nondeg()]
    while True:
        Q.changed = False
        for a in atoms:
            d = Q.dim(a)
            if d == 0:
                continue
            r, eta = Q.norm(a, identity(d))
            for i in range(d + 1):
                mine = Q.face_of(a, i)
                theirs = Q.apply_root(r, compose(eta, coface(d, i)))
                Q.identify(mine, theirs)
        if not Q.changed:
            break
    naming = naming or (lambda key, sid: (key, sid))
    roots = [a for a in atoms if Q.find(a) == a and a not in Q.mark]
    name_of = {r: naming(*r) for r in roots}
    if len(set(name_of.values())) != len(name_of):
        raise ValueError("colimit naming is not injective")
    data = {}
    for r in roots:
        d = Q.dim(r)
        faces = []
        if d > 0:
            for i in range(d + 1):
                fr, feta = Q.face_of(r, i)
                faces.append((name_of[fr], feta))
        data[name_of[r]] = (d, tuple(faces))
    colim = SimplicialSet(data, trunc, complete=complete, name=name, validate=False)
    cocone = {}
    for key in objects:
        asg = {}
        for sid in objects[key].nondeg():
            r, eta = Q.norm((key, sid), identity(objects[key].dim_of(sid)))
            asg[sid] = (name_of[r], eta)
        cocone[key] = SimplicialMap(objects[key], colim, asg, validate=False)
    return colim, cocone


def pushout(f: SimplicialMap, g: SimplicialMap, name=None, naming=None):
    """Pushout of ``B <- A -> C`` given ``f : A -> B`` and ``g : A -> C``."""
    objs = {"A": f.source, "B": f.target, "C": g.target}
    return colimit(objs, [("A", "B", f), ("A", "C", g)], name=name, order=["B", "C", "A"], naming=naming)
