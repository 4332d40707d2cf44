"""Sound-but-incomplete equivalence checking.

Every answer is a :class:`Verdict`: ``equivalent`` with a witness that can be
replayed, ``not_equivalent`` with an obstruction that can be recomputed, or
``unknown`` with the budget or truncation that stopped the search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ._util import Budget, BudgetExceeded, TruncationError, Undetermined, ident
from .simplicial import SimplicialMap, SimplicialSet, make_generator, product, simplex
from .simplicial.constructions import product_nf
from .simplicial.ops import is_identity
from .simplicial.search import MapSearch

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"


@dataclass
class Verdict:
    outcome: str
    kind: str = ""
    details: dict = field(default_factory=dict)
    components: list = field(default_factory=list)
    recheck: Callable | None = field(default=None, repr=False, compare=False)

    @property
    def equivalent(self) -> bool:
        return self.outcome == EQUIVALENT

    @property
    def refuted(self) -> bool:
        return self.outcome == NOT_EQUIVALENT

    @property
    def unknown(self) -> bool:
        return self.outcome == UNKNOWN

    def replay(self) -> bool:
        """Re-verify the witness or recompute the obstruction."""
        ok = self.recheck() if self.recheck is not None else True
        return ok and all(v.replay() for _, v in self.components)


def equivalent(kind, recheck=None, **details) -> Verdict:
    return Verdict(EQUIVALENT, kind, details, recheck=recheck)


def not_equivalent(kind, recheck=None, **details) -> Verdict:
    return Verdict(NOT_EQUIVALENT, kind, details, recheck=recheck)


def unknown(kind, **details) -> Verdict:
    return Verdict(UNKNOWN, kind, details)


def unknown_from(exc: Undetermined) -> Verdict:
    if isinstance(exc, BudgetExceeded):
        return unknown("budget", resource=exc.resource, limit=exc.limit)
    if isinstance(exc, TruncationError):
        return unknown("truncation", needed=exc.needed, available=exc.available)
    return unknown("undetermined", reason=str(exc))


def combine(components: list, kind="conjunction") -> Verdict:
    """All components equivalent -> equivalent; any refuted -> refuted; else unknown."""
    outs = [v.outcome for _, v in components]
    if any(o == NOT_EQUIVALENT for o in outs):
        outcome = NOT_EQUIVALENT
    elif all(o == EQUIVALENT for o in outs):
        outcome = EQUIVALENT
    else:
        outcome = UNKNOWN
    return Verdict(outcome, kind, {"count": len(components)}, components=list(components))


# -- homology ---------------------------------------------------------------------

def smith_invariants(matrix) -> list:
    """Nonzero invariant factors of an integer matrix (exact, arbitrary precision)."""
    A = [list(row) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    out = []
    t = 0
    while t < rows and t < cols:
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, rows):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, cols):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        out.append(abs(A[t][t]))
        t += 1
    return out


def boundary_matrix(X: SimplicialSet, d: int) -> list:
    """Matrix of the normalized boundary ``C_d -> C_{d-1}`` (rows index ``C_{d-1}``)."""
    rows = {s: i for i, s in enumerate(X.nondeg(d - 1))}
    cols = X.nondeg(d)
    M = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        nf = X.nf(s)
        for i in range(d + 1):
            fs, eta = X.face(nf, i)
            if is_identity(eta):
                M[rows[fs]][j] += (-1) ** i
    return M


@dataclass(frozen=True)
class Group:
    rank: int
    torsion: tuple = ()

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return "+".join(parts) if parts else "0"


def homology(X: SimplicialSet, max_deg: int) -> list:
    """Integral homology ``H_0 .. H_max_deg`` of the normalized chain complex."""
    X.require(max_deg + 1, "homology")
    ranks, invs = {}, {}
    for d in range(max_deg + 2):
        if d == 0 or not X.nondeg(d) or not X.nondeg(d - 1):
            ranks[d], invs[d] = 0, []
            continue
        inv = smith_invariants(boundary_matrix(X, d))
        ranks[d], invs[d] = len(inv), inv
    out = []
    for d in range(max_deg + 1):
        free = len(X.nondeg(d)) - ranks[d] - ranks[d + 1]
        tors = tuple(sorted(e for e in invs[d + 1] if e > 1))
        out.append(Group(free, tors))
    return out


def pi0_classes(X: SimplicialSet) -> dict:
    """Vertex -> canonical representative of its path component."""
    parent = {v: v for v in X.nondeg(0)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    from ._util import canon_key

    for e in X.nondeg(1):
        a, b = find(X.vertex(X.nf(e), 0)), find(X.vertex(X.nf(e), 1))
        if a != b:
            if canon_key(b) < canon_key(a):
                a, b = b, a
            parent[b] = a
    return {v: find(v) for v in X.nondeg(0)}


def pi0(X: SimplicialSet) -> int:
    return len(set(pi0_classes(X).values()))


# -- horn filling -----------------------------------------------------------------

_HORNS = {}


def horn(n: int, k: int) -> SimplicialSet:
    key = (n, k)
    if key not in _HORNS:
        _HORNS[key] = make_generator("horn", n, k)
    return _HORNS[key]


def horn_faces(n: int, k: int) -> list:
    full = tuple(range(n + 1))
    return [full[:i] + full[i + 1:] for i in range(n + 1) if i != k]


def unfilled_horns(X: SimplicialSet, n: int, k: int, vertex_filter=None, budget=None, first_only=True):
    """Maps ``Λ^n_k -> X`` with no filler; ``vertex_filter(images)`` selects horns to test."""
    X.require(n, "horn filling")
    H = horn(n, k)
    filled = set()
    for x in X.simplices(n):
        bnd = X.boundary(x)
        filled.add(bnd[:k] + bnd[k + 1:])
    faces = horn_faces(n, k)
    out = []
    for h in MapSearch(H, X, budget=budget):
        if vertex_filter is not None and not vertex_filter(tuple(h.assignment[(v,)][0] for v in range(n + 1))):
            continue
        key = tuple(h.assignment[f] for f in faces)
        if key not in filled:
            out.append(h)
            if first_only:
                break
    return out


def _definitive_dim(*objs):
    """Largest dimension beyond which horn/boundary problems are automatic, if known."""
    bounds = [Z.cosk for Z in objs]
    if any(b is None for b in bounds):
        return None
    return max(bounds) + 1


def is_kan(X: SimplicialSet, max_dim: int, budget: Budget | None = None) -> Verdict:
    """Horn filling in every dimension up to ``max_dim``."""
    budget = budget or Budget()
    checked = 0
    try:
        for n in range(1, max_dim + 1):
            for k in range(n + 1):
                bad = unfilled_horns(X, n, k, budget=budget)
                checked += 1
                if bad:
                    h = bad[0]

                    return not_equivalent(
                        "unfilled_horn", n=n, k=k, horn=_fmt_map(h),
                        recheck=lambda n=n, k=k, h=h: _horn_unfilled(X, n, k, h),
                    )
    except Undetermined as exc:
        return unknown_from(exc)
    bound = _definitive_dim(X)
    return equivalent(
        "horn_filling", max_dim=max_dim, definitive=bound is not None and max_dim >= bound,
        recheck=lambda: True,
    )


def _horn_unfilled(X, n, k, h) -> bool:
    faces = horn_faces(n, k)
    want = tuple(h.assignment[f] for f in faces)
    for x in X.simplices(n):
        bnd = X.boundary(x)
        if bnd[:k] + bnd[k + 1:] == want:
            return False
    return True


def _fmt_map(f: SimplicialMap) -> str:
    parts = []
    for s in f.source.nondeg():
        sid, eta = f.assignment[s]
        parts.append(f"{ident(s)}->{fmt_nf((sid, eta))}")
    return ";".join(parts)


def fmt_nf(nf) -> str:
    from .simplicial.ops import word_of

    sid, eta = nf
    w = word_of(eta)
    return ident(sid) + ("!" + "".join(f"s{i}" for i in w) if w else "")


# -- trivial fibrations -------------------------------------------------------------

def trivial_fibration_check(f: SimplicialMap, max_dim: int, budget: Budget | None = None) -> Verdict:
    """Right lifting against ``∂Δ^n -> Δ^n`` for ``n <= max_dim``.

    When both sides carry a coskeletality bound ``c`` and ``max_dim >= c + 1``
    the positive answer covers every dimension.
    """
    budget = budget or Budget()
    X, Y = f.source, f.target
    try:
        ximg = {}
        for v in X.nondeg(0):
            ximg.setdefault(f.assignment[v][0], v)
        for y in Y.nondeg(0):
            if y not in ximg:
                return not_equivalent(
                    "boundary_lift", n=0, target=ident(y),
                    recheck=lambda y=y: all(f.assignment[v][0] != y for v in X.nondeg(0)),
                )
        for n in range(1, max_dim + 1):
            X.require(n, "trivial fibration check")
            Y.require(n, "trivial fibration check")
            B = make_generator("boundary", n)
            index = {}
            for x in X.simplices(n):
                index.setdefault(X.boundary(x), set()).add(f(x))
            for b in MapSearch(B, X, budget=budget):
                bnd = tuple(b.assignment[tuple(j for j in range(n + 1) if j != i)] for i in range(n + 1))
                have = index.get(bnd, set())
                want = tuple(f(s) for s in bnd)
                for y in Y.fillers(want):
                    if y not in have:
                        return not_equivalent(
                            "boundary_lift", n=n, boundary=_fmt_map(b), target=fmt_nf(y),
                            recheck=lambda bnd=bnd, y=y: all(
                                f(x) != y for x in X.simplices(len(bnd) - 1) if X.boundary(x) == bnd
                            ),
                        )
    except Undetermined as exc:
        return unknown_from(exc)
    bound = _definitive_dim(X, Y)
    definitive = bound is not None and max_dim >= bound
    return equivalent("trivial_fibration", max_dim=max_dim, definitive=definitive, recheck=lambda: True)


# -- weak equivalence ------------------------------------------------------------------

def _iso_definitive(f: SimplicialMap) -> bool:
    X, Y = f.source, f.target
    if X.complete and Y.complete:
        return True
    bound = _definitive_dim(X, Y)
    return bound is not None and min(X.trunc_dim, Y.trunc_dim) >= bound - 1


def _known_top(X: SimplicialSet):
    return None if X.complete else X.trunc_dim


def weak_equiv_verdict(f: SimplicialMap, budget: Budget | int | None = None, max_dim: int | None = None) -> Verdict:
    """Pipeline: isomorphism, π₀, homology, trivial fibration, explicit witnesses."""
    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 200000)
    X, Y = f.source, f.target
    # (1) f itself is an isomorphism.
    if X is Y and all(f.assignment[s] == X.nf(s) for s in X.nondeg()):
        return equivalent("iso", recheck=lambda: all(f.assignment[s] == X.nf(s) for s in X.nondeg()))
    if f.is_iso() and _iso_definitive(f):
        return equivalent("iso", recheck=lambda: f.is_iso())
    # (2) path components.
    cx, cy = pi0(X), pi0(Y)
    if cx != cy:
        return not_equivalent(
            "pi0", left=cx, right=cy, recheck=lambda: pi0(X) != pi0(Y)
        )
    clx, cly = pi0_classes(X), pi0_classes(Y)
    induced = {}
    for v in X.nondeg(0):
        induced.setdefault(clx[v], set()).add(cly[f.assignment[v][0]])
    images = set().union(*induced.values()) if induced else set()
    if len(images) != cy:
        return not_equivalent(
            "pi0_map", left=cx, right=cy, image=len(images),
            recheck=lambda: _pi0_image(f) != pi0(Y),
        )
    # (3) homology in the degrees both sides determine.
    tops = [t for t in (_known_top(X), _known_top(Y)) if t is not None]
    hdeg = (min(tops) - 1) if tops else max(X.dim, Y.dim, 0)
    if max_dim is not None:
        hdeg = min(hdeg, max_dim)
    if hdeg >= 0:
        hx, hy = homology(X, hdeg), homology(Y, hdeg)
        for d in range(hdeg + 1):
            if hx[d] != hy[d]:
                return not_equivalent(
                    "homology", degree=d, left=str(hx[d]), right=str(hy[d]),
                    recheck=lambda d=d: homology(X, d)[d] != homology(Y, d)[d],
                )
    # (4) trivial fibration.
    bound = _definitive_dim(X, Y)
    if bound is not None:
        tf_dim = bound
        tops2 = [t for t in (_known_top(X), _known_top(Y)) if t is not None]
        if not tops2 or min(tops2) >= tf_dim:
            tf = trivial_fibration_check(f, tf_dim, budget)
            if tf.equivalent and tf.details.get("definitive"):
                return equivalent(
                    "trivial_fibration", max_dim=tf_dim,
                    recheck=lambda: trivial_fibration_check(f, tf_dim).equivalent,
                )
    # (5) explicit witnesses.
    try:
        w = deformation_retract_witness(f, budget)
        if w is not None:
            return w
    except Undetermined as exc:
        return unknown_from(exc)
    try:
        w = anodyne_witness(f, budget)
        if w is not None:
            return w
    except Undetermined as exc:
        return unknown_from(exc)
    return unknown("exhausted", budget=budget.record()["used"], limit=budget.limit)


def _pi0_image(f) -> int:
    cly = pi0_classes(f.target)
    return len({cly[f.assignment[v][0]] for v in f.source.nondeg(0)})


def deformation_retract_witness(f: SimplicialMap, budget: Budget):
    """Find ``r`` with ``r f = id`` and a homotopy ``Y × Δ¹ -> Y`` between ``f r`` and ``id``."""
    X, Y = f.source, f.target
    if not f.is_injective() or not (X.complete and Y.complete):
        return None
    fixed = {f.assignment[s][0]: X.nf(s) for s in X.nondeg()}
    YI = product(Y, simplex(1))
    for r in MapSearch(Y, X, fixed=fixed, budget=budget):
        fr = {y: f(r.assignment[y]) for y in Y.nondeg()}
        for direction in (0, 1):
            ends = _end_assignments(Y, fr, direction)
            h = next(iter(MapSearch(YI, Y, fixed=ends, budget=budget)), None)
            if h is None:
                continue

            def recheck(r=r, h=h, direction=direction):
                SimplicialMap(Y, X, r.assignment).validate()
                SimplicialMap(YI, Y, h.assignment).validate()
                fr2 = {y: f(r.assignment[y]) for y in Y.nondeg()}
                ok = all(r(f.assignment[s]) == X.nf(s) for s in X.nondeg())
                return ok and all(h.assignment[s] == v for s, v in _end_assignments(Y, fr2, direction).items())

            return equivalent(
                "deformation_retract", direction=direction, retraction=_fmt_map(r), recheck=recheck
            )
    return None


def _end_assignments(Y, fr, direction):
    """Values of a homotopy on ``Y × {0}`` and ``Y × {1}``: ``f r`` at one end, the identity at the other."""
    out = {}
    for y in Y.nondeg():
        d = Y.dim_of(y)
        for e in (0, 1):
            sid, _ = product_nf(Y.nf(y), ((e,), (0,) * (d + 1)))
            out[sid] = fr[y] if e == direction else Y.nf(y)
    return out


def anodyne_witness(f: SimplicialMap, budget: Budget):
    """A horn-attachment certificate presenting ``Y`` from the image of a monomorphism ``f``."""
    if not f.is_injective() or not (f.source.complete and f.target.complete):
        return None
    from .anodyne import search_relative_certificate

    cert = search_relative_certificate(f.target, f.image(), kinds="kan", budget=budget)
    if cert is None:
        return None
    return equivalent(
        "anodyne", steps=len(cert.steps), certificate=cert.summary(), recheck=lambda: cert.verify()[0]
    )


# -- strata and links -------------------------------------------------------------------

def stratum_map(f, p) -> SimplicialMap:
    """The map ``X_p -> Y_p`` induced by a stratified map."""
    from .stratified import stratum

    Xp = stratum(f.source, p)
    Yp = Xp if f.target is f.source else stratum(f.target, p)
    return SimplicialMap(Xp, Yp, {s: f.map.assignment[s] for s in Xp.nondeg()})


def link_map(f, p, q, max_dim: int, budget_limit=10**6) -> SimplicialMap:
    """Postcomposition ``Map_{/P}({p<q}, X) -> Map_{/P}({p<q}, Y)``."""
    from .simplicial.hom import lookup
    from .stratified import link

    Lx = link(f.source, p, q, max_dim, budget_limit)
    Ly = Lx if f.target is f.source else link(f.target, p, q, max_dim, budget_limit)
    asg = {}
    for sid in Lx.nondeg():
        n = Lx.dim_of(sid)
        g = Lx.points[sid]
        lvl = Ly.cosimplicial.level(n)
        comp = {a: f.map(g.assignment[a]) for a in lvl.nondeg()}
        asg[sid] = lookup(Ly, SimplicialMap(lvl, f.target.total, comp, validate=False), n)
    return SimplicialMap(Lx, Ly, asg)


def strata_links_equiv(f, budget: Budget | int | None = None, max_dim: int = 2) -> Verdict:
    """Weak equivalence on every stratum and on every link ``p < q``.

    ``f`` is a stratified map.  Each component gets its own budget; the
    result is a conjunction whose components name the stratum or link.
    """
    limit = budget.limit if isinstance(budget, Budget) else (budget or 200000)
    P = f.source.base
    comps = []
    for p in P.elements:
        try:
            g = stratum_map(f, p)
            comps.append((f"stratum {p}", weak_equiv_verdict(g, Budget(limit), max_dim=max_dim)))
        except Undetermined as exc:
            comps.append((f"stratum {p}", unknown_from(exc)))
    for p, q in P.relation_pairs():
        if p == q:
            continue
        try:
            g = link_map(f, p, q, max_dim)
            comps.append((f"link {p}<{q}", weak_equiv_verdict(g, Budget(limit), max_dim=max_dim)))
        except Undetermined as exc:
            comps.append((f"link {p}<{q}", unknown_from(exc)))
    return combine(comps, kind="strata_links")
