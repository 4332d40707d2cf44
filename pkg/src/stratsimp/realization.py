"""Exact rational evaluation of point-set formulas on geometric realizations.

Points of ``|P|`` are :class:`RationalPoint` (a string and barycentric
coordinates).  Points of the realization of a vertex-determined simplicial
set are weight maps from vertices to fractions whose support spans a
simplex.  No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._util import canon_key, csorted
from .poset import Poset

ZERO, ONE = Fraction(0), Fraction(1)


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or int")
    return Fraction(x)


@dataclass(frozen=True)
class RationalPoint:
    """A point of ``|P|`` in the closed simplex of a string ``carrier``."""

    carrier: tuple
    coords: tuple

    def __post_init__(self):
        coords = tuple(_q(c) for c in self.coords)
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "coords", coords)
        if len(coords) != len(self.carrier):
            raise ValueError("carrier and coordinates have different lengths")
        if any(c < 0 for c in coords):
            raise ValueError(f"negative coordinate in {coords}")
        if sum(coords) != 1:
            raise ValueError(f"coordinates {coords} do not sum to 1")

    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coords) if c != 0)

    def reduced(self) -> "RationalPoint":
        """The same point expressed on the face spanned by its support."""
        idx = self.support()
        return RationalPoint(tuple(self.carrier[i] for i in idx), tuple(self.coords[i] for i in idx))

    def include(self, big) -> "RationalPoint":
        """Push forward along the face inclusion of ``carrier`` into ``big``."""
        big = tuple(big)
        pos = {p: i for i, p in enumerate(big)}
        coords = [ZERO] * len(big)
        for p, c in zip(self.carrier, self.coords):
            if p not in pos:
                raise ValueError(f"{p!r} is not in the string {big}")
            coords[pos[p]] = c
        return RationalPoint(big, tuple(coords))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{p}:{c}" for p, c in zip(self.carrier, self.coords)) + ")"


def pi_realization(x: RationalPoint):
    """The stratum of a point: the largest carrier element with nonzero weight."""
    return x.carrier[max(x.support())]


def barycentric_grid(m: int, k: int) -> list:
    """Points of ``Δ^m`` whose coordinates have denominators at most ``k``."""
    if k < 1:
        raise ValueError("grid density must be positive")
    seen = set()
    for d in range(1, k + 1):
        for parts in _compositions(d, m + 1):
            seen.add(tuple(Fraction(a, d) for a in parts))
    return sorted(seen)


def _compositions(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, n - 1):
            yield (a,) + rest


def unit_grid(k: int) -> list:
    """Rationals in ``[0, 1]`` with denominators at most ``k``."""
    return sorted({Fraction(a, d) for d in range(1, k + 1) for a in range(d + 1)})


# -- the deformation retraction onto |Σ| ---------------------------------------------

def retraction_homotopy(P: Poset, sigma, x: RationalPoint, s, printed: bool = False) -> RationalPoint:
    """``H^S(x, s)`` on the carrier ``S`` of ``x`` for the string ``sigma``.

    Coordinates at indices outside ``I_S`` (carrier elements not in
    ``sigma``) are scaled by ``1 - s``; the others absorb the lost weight
    proportionally.  With ``printed=True`` the two cases are swapped, which
    is undefined on points already supported in ``sigma``.
    """
    sigma = P.string(sigma)
    S = P.string(x.carrier)
    if S != x.carrier:
        raise ValueError(f"carrier {x.carrier} is not listed in increasing order")
    s = _q(s)
    if not 0 <= s <= 1:
        raise ValueError(f"homotopy parameter {s} is outside [0, 1]")
    if pi_realization(x) not in sigma:
        raise ValueError(f"{x} does not lie over the string {sigma}")
    inside = [i for i, p in enumerate(S) if p in sigma]
    out_w = sum((x.coords[i] for i in range(len(S)) if i not in inside), ZERO)
    in_w = sum((x.coords[i] for i in inside), ZERO)
    if printed:
        inside = [i for i in range(len(S)) if i not in inside]
        in_w, out_w = out_w, in_w
        if in_w == 0:
            raise ZeroDivisionError(f"printed orientation divides by zero at {x}")
    assert in_w > 0, "the stratum of x lies in sigma, so some inside weight is positive"
    grow = 1 + s * out_w / in_w
    coords = tuple(x.coords[i] * grow if i in inside else x.coords[i] * (1 - s) for i in range(len(S)))
    return RationalPoint(S, coords)


@dataclass
class CheckLog:
    """Counts of checked identities, with the first few failures kept verbatim."""

    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail=None) -> None:
        self.checked[name] = self.checked.get(name, 0) + 1
        if not ok and len(self.failures) < 20:
            self.failures.append((name, detail))
        if not ok:
            self.checked[name + ":failed"] = self.checked.get(name + ":failed", 0) + 1

    @property
    def ok(self) -> bool:
        return not any(k.endswith(":failed") for k in self.checked)

    def merge(self, other: "CheckLog") -> None:
        for k, v in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + v
        self.failures.extend(other.failures[: max(0, 20 - len(self.failures))])


def check_retraction(P: Poset, k: int, printed: bool = False) -> CheckLog:
    """Verify the retraction identities on a grid for every string ``Σ`` of ``P``."""
    log = CheckLog()
    svals = unit_grid(k)
    strs = P.strings()
    for sigma in strs:
        for S in strs:
            for coords in barycentric_grid(len(S) - 1, k):
                x = RationalPoint(S, coords)
                if pi_realization(x) not in sigma:
                    continue
                stratum = pi_realization(x)
                for s in svals:
                    try:
                        y = retraction_homotopy(P, sigma, x, s, printed)
                    except ZeroDivisionError as exc:
                        log.record("defined", False, str(exc))
                        continue
                    log.record("over_P", pi_realization(y) == stratum, (sigma, str(x), s))
                    if s == 0:
                        log.record("start_identity", y == x, (sigma, str(x)))
                    if s == 1:
                        log.record("end_in_sigma", all(S[i] in sigma for i in y.support()), (sigma, str(x)))
                    if all(S[i] in sigma for i in x.support()):
                        log.record("fixes_sigma", y == x, (sigma, str(x), s))
                    # Compatibility with every face of the carrier containing the support.
                    sup = set(x.support())
                    for T in strs:
                        if T == S or not set(T) < set(S) or not {S[i] for i in sup} <= set(T):
                            continue
                        xt = RationalPoint(T, tuple(x.coords[S.index(p)] for p in T))
                        try:
                            yt = retraction_homotopy(P, sigma, xt, s, printed)
                        except ZeroDivisionError as exc:
                            log.record("defined", False, str(exc))
                            continue
                        log.record("face_compatible", yt.include(S) == y, (sigma, str(xt), S, s))
    return log


# -- straight-line contraction of exit paths ---------------------------------------------

def _vec(x) -> tuple:
    return tuple(_q(c) for c in x)


def stratum_index(x) -> int:
    """Largest index with nonzero weight in a point of ``Δ^n``."""
    return max(i for i, c in enumerate(x) if c != 0)


class PLPath:
    """A piecewise-linear path in ``Δ^n`` through rational breakpoints."""

    def __init__(self, breakpoints):
        pts = [(_q(t), _vec(x)) for t, x in breakpoints]
        if len(pts) < 2 or pts[0][0] != 0 or pts[-1][0] != 1:
            raise ValueError("breakpoint times must start at 0 and end at 1")
        if any(a[0] >= b[0] for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoint times must strictly increase")
        n = len(pts[0][1])
        for _, x in pts:
            if len(x) != n or any(c < 0 for c in x) or sum(x) != 1:
                raise ValueError(f"breakpoint {x} is not a point of the simplex")
        self.breakpoints = pts

    def __call__(self, t):
        t = _q(t)
        if not 0 <= t <= 1:
            raise ValueError(f"time {t} is outside [0, 1]")
        pts = self.breakpoints
        for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                u = (t - t0) / (t1 - t0)
                return tuple((1 - u) * a + u * b for a, b in zip(x0, x1))
        raise AssertionError("unreachable")

    def times(self) -> list:
        return [t for t, _ in self.breakpoints]


def check_exit_path(x, y, gamma: PLPath) -> None:
    """Raise ``ValueError`` unless ``gamma`` runs from ``x`` to ``y`` inside stratum ``j`` for t > 0."""
    x, y = _vec(x), _vec(y)
    if gamma(0) != x:
        raise ValueError("path does not start at x")
    if gamma(1) != y:
        raise ValueError("path does not end at y")
    i, j = stratum_index(x), stratum_index(y)
    if i > j:
        raise ValueError(f"x lies in stratum {i} above the stratum {j} of y")
    # Interior points of a segment have the union of the endpoint supports,
    # so checking the breakpoints after time 0 covers every t > 0.
    for t, z in gamma.breakpoints[1:]:
        if stratum_index(z) != j:
            raise ValueError(f"path leaves stratum {j} at time {t}")


def path_contraction(x, y, gamma: PLPath, s, t) -> tuple:
    """``(1 - s) γ(t) + s (1 - t) x + s t y``."""
    x, y = _vec(x), _vec(y)
    s, t = _q(s), _q(t)
    g = gamma(t)
    return tuple((1 - s) * a + s * (1 - t) * b + s * t * c for a, b, c in zip(g, x, y))


def sample_exit_paths(n: int, k: int) -> list:
    """Exit paths in ``Δ^n`` with one interior breakpoint, built from grid points."""
    pts = barycentric_grid(n, min(k, 3))
    out = []
    for x in pts:
        i = stratum_index(x)
        for y in pts:
            j = stratum_index(y)
            if j < i:
                continue
            mids = [z for z in pts if stratum_index(z) == j]
            mid = mids[(len(out) * 7) % len(mids)]
            out.append((x, y, PLPath([(0, x), (Fraction(1, 2), mid), (1, y)])))
    return out


def check_path_contraction(n: int, k: int) -> CheckLog:
    log = CheckLog()
    grid = unit_grid(k)
    for x, y, gamma in sample_exit_paths(n, k):
        check_exit_path(x, y, gamma)
        j = stratum_index(y)
        for s in grid:
            log.record("start_fixed", path_contraction(x, y, gamma, s, 0) == x, (x, y, s))
            log.record("end_fixed", path_contraction(x, y, gamma, s, 1) == y, (x, y, s))
            for t in grid:
                z = path_contraction(x, y, gamma, s, t)
                if s == 0:
                    log.record("s0_is_gamma", z == gamma(t), (x, y, t))
                if s == 1:
                    line = tuple((1 - t) * a + t * b for a, b in zip(x, y))
                    log.record("s1_is_line", z == line, (x, y, t))
                if t > 0:
                    log.record("stratum_for_t_positive", stratum_index(z) == j, (x, y, s, t))
                # Affine in s: the midpoint in s is the average of the ends.
                half = path_contraction(x, y, gamma, s / 2, t)
                z0 = path_contraction(x, y, gamma, 0, t)
                log.record("affine_in_s", all(2 * h == a + b for h, a, b in zip(half, z0, z)), (x, y, s, t))
    return log


# -- realizations of vertex-determined simplicial sets -----------------------------------

def _wpoint(weights: dict) -> tuple:
    return tuple(sorted(((v, _q(w)) for v, w in weights.items() if w != 0), key=lambda p: canon_key(p[0])))


def _combine(terms) -> tuple:
    acc = {}
    for c, pt in terms:
        for v, w in pt:
            acc[v] = acc.get(v, ZERO) + c * w
    return _wpoint(acc)


class Realization:
    """Points of ``|K|`` for a vertex-determined simplicial set ``K``."""

    def __init__(self, K):
        if not K.vertex_determined():
            raise ValueError("realization points need a vertex-determined simplicial set")
        self.K = K
        self.spans = {frozenset(K.vertices(K.nf(s))): s for s in K.nondeg()}

    def simplex_of(self, pt):
        """The nondegenerate simplex with ``pt`` in its interior, or ``None``."""
        return self.spans.get(frozenset(v for v, _ in pt))

    def check(self, pt) -> None:
        if sum((w for _, w in pt), ZERO) != 1 or any(w < 0 for _, w in pt):
            raise ValueError(f"{pt} is not a convex combination")
        if self.simplex_of(pt) is None:
            raise ValueError(f"support of {pt} does not span a simplex")

    def grid(self, k: int) -> list:
        out = set()
        K = self.K
        for s in K.nondeg():
            vs = K.vertices(K.nf(s))
            for coords in barycentric_grid(len(vs) - 1, k):
                out.add(_wpoint(dict(zip(vs, coords))))
        return sorted(out, key=canon_key)


def push(f_vertices: dict, pt) -> tuple:
    """Image of a point under the linear extension of a vertex map."""
    acc = {}
    for v, w in pt:
        u = f_vertices[v]
        acc[u] = acc.get(u, ZERO) + w
    return _wpoint(acc)


@dataclass
class WPath:
    """A path in a realization: breakpoints ``(time, point)``, linear in between."""

    breakpoints: list

    def __call__(self, t):
        t = _q(t)
        pts = self.breakpoints
        for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                u = (t - t0) / (t1 - t0)
                return _combine([(1 - u, x0), (u, x1)])
        if len(pts) == 1 or t == pts[0][0]:
            return pts[0][1]
        raise ValueError(f"time {t} is outside the path")

    def times(self) -> list:
        return [t for t, _ in self.breakpoints]

    def reparametrized(self, s) -> "WPath":
        """``t -> γ(s t)``."""
        s = _q(s)
        if s == 0:
            return WPath([(ZERO, self(0)), (ONE, self(0))])
        pts = [(t / s, x) for t, x in self.breakpoints if t < s]
        pts.append((ONE, self(s)))
        return WPath(pts)


def const_path(pt) -> WPath:
    return WPath([(ZERO, pt), (ONE, pt)])


def paths_equal(a: WPath, b: WPath, extra=()) -> bool:
    times = set(a.times()) | set(b.times()) | set(extra)
    return all(a(t) == b(t) for t in times)


class MappingPath:
    """``M_B(f)`` for a stratified map ``f : T -> U`` with ``B = |P|``.

    A point is a pair ``(x, γ)`` with ``γ`` a path in ``|U|`` starting at
    ``f(x)`` whose image in ``|P|`` stays at the image of ``x``.
    """

    def __init__(self, f):
        self.f = f
        self.T = Realization(f.source.total)
        self.U = Realization(f.target.total)
        self.fv = {v: f.map.assignment[v][0] for v in f.source.total.nondeg(0)}
        self.sT = dict(f.source.labels)
        self.sU = dict(f.target.labels)

    def base_T(self, x):
        return push(self.sT, x)

    def base_U(self, y):
        return push(self.sU, y)

    def fmap(self, x):
        return push(self.fv, x)

    def i_f(self, x):
        return (x, const_path(self.fmap(x)))

    def q_f(self, pt):
        return pt[1](1)

    def pr1(self, pt):
        return pt[0]

    def is_point(self, pt) -> bool:
        x, g = pt
        if g(0) != self.fmap(x):
            return False
        b = self.base_T(x)
        for t, y in g.breakpoints:
            self.U.check(y)
            if self.base_U(y) != b:
                return False
        # Consecutive breakpoints must share a simplex for the segment to exist.
        return all(self.U.simplex_of(_combine([(Fraction(1, 2), a), (Fraction(1, 2), c)])) is not None
                   for (_, a), (_, c) in zip(g.breakpoints, g.breakpoints[1:]))

    def retraction(self, pt, s):
        """``((x, γ), s) -> (x, t -> γ(s t))``."""
        x, g = pt
        return (x, g.reparametrized(s))

    def fiber_moves(self, y):
        """Pairs ``(u, u')`` of equally labelled vertices with a simplex containing ``y``, ``u`` and ``u'``."""
        sup = {v for v, _ in y}
        out = []
        for u in csorted(sup):
            for u2 in self.f.target.total.nondeg(0):
                if u2 == u or self.sU[u2] != self.sU[u]:
                    continue
                if frozenset(sup | {u2}) in self.U.spans:
                    out.append((u, u2))
        return out

    def sample_paths(self, x, k: int) -> list:
        """The constant path and straight fiber moves of weight from ``u`` to ``u'``."""
        y0 = self.fmap(x)
        out = [const_path(y0)]
        w = dict(y0)
        for u, u2 in self.fiber_moves(y0):
            for a in unit_grid(min(k, 2))[1:]:
                moved = dict(w)
                amt = a * w[u]
                moved[u] -= amt
                moved[u2] = moved.get(u2, ZERO) + amt
                y1 = _wpoint(moved)
                out.append(WPath([(ZERO, y0), (Fraction(1, 2), y0), (ONE, y1)]))
        return out


def check_mapping_path(f, k: int) -> CheckLog:
    """Factorization and deformation-retraction identities on sampled points."""
    M = MappingPath(f)
    log = CheckLog()
    svals = unit_grid(k)
    for x in M.T.grid(k):
        ix = M.i_f(x)
        log.record("i_f_in_M", M.is_point(ix), x)
        log.record("f_is_q_i", M.q_f(ix) == M.fmap(x), x)
        log.record("pr1_i_is_id", M.pr1(ix) == x, x)
        for g in M.sample_paths(x, k):
            pt = (x, g)
            log.record("sample_in_M", M.is_point(pt), x)
            for s in svals:
                r = M.retraction(pt, s)
                log.record("retraction_in_M", M.is_point(r), (x, s))
                log.record("retraction_over_B", M.base_T(r[0]) == M.base_T(x), (x, s))
                if s == 0:
                    log.record("retraction_start", r[0] == M.i_f(M.pr1(pt))[0]
                               and paths_equal(r[1], M.i_f(M.pr1(pt))[1], svals), x)
                if s == 1:
                    log.record("retraction_end", paths_equal(r[1], g, svals), x)
    return log


# -- the lift formula for horn inclusions -----------------------------------------------

@dataclass
class HornRetraction:
    """Retraction data ``(r', H', d')`` for ``|Λ^n_k| ⊂ |Δ^n|``."""

    n: int
    k: int
    r: object
    H: object
    d: object


def standard_horn_retraction(n: int, k: int) -> HornRetraction:
    """Radial projection away from a point beyond the face opposite ``k``.

    ``r'`` moves along ``a - c`` with ``c = 2b - e_k`` (``b`` the barycenter
    of the missing face) until a coordinate other than ``k`` vanishes;
    ``H'`` is the straight line from ``r'`` to the identity and ``d'`` is the
    smallest coordinate other than ``k``.
    """
    if not 0 <= k <= n or n < 1:
        raise ValueError("need n >= 1 and 0 <= k <= n")
    others = [i for i in range(n + 1) if i != k]
    c = [Fraction(2, n) if i != k else Fraction(-1) for i in range(n + 1)]

    def r(a):
        a = _vec(a)
        lam = min(a[i] / (c[i] - a[i]) for i in others if a[i] < c[i])
        return tuple(ai + lam * (ai - ci) for ai, ci in zip(a, c))

    def H(a, s):
        s = _q(s)
        ra = r(a)
        return tuple((1 - s) * u + s * v for u, v in zip(ra, _vec(a)))

    def d(a):
        return min(_vec(a)[i] for i in others)

    return HornRetraction(n, k, r, H, d)


def in_horn(a, k: int) -> bool:
    return any(c == 0 for i, c in enumerate(a) if i != k)


def check_horn_retraction(data: HornRetraction, grid: int) -> CheckLog:
    log = CheckLog()
    n, k = data.n, data.k
    for a in barycentric_grid(n, grid):
        ra = data.r(a)
        log.record("r_in_simplex", all(c >= 0 for c in ra) and sum(ra) == 1, a)
        log.record("r_in_horn", in_horn(ra, k), a)
        log.record("d_zero_iff_horn", (data.d(a) == 0) == in_horn(a, k), a)
        log.record("d_in_unit", 0 <= data.d(a) <= 1, a)
        if in_horn(a, k):
            log.record("r_fixes_horn", ra == tuple(a), a)
        for s in unit_grid(grid):
            h = data.H(a, s)
            log.record("H_in_simplex", all(c >= 0 for c in h) and sum(h) == 1, (a, s))
            if in_horn(a, k):
                log.record("H_fixes_horn", h == tuple(a), (a, s))
        log.record("H_start", data.H(a, 0) == ra, a)
        log.record("H_end", data.H(a, 1) == tuple(a), a)
    return log


@dataclass
class LiftProblem:
    """A lifting problem of ``|Σ| × |Λ^n_k| -> M_B(f)`` against ``q_f``.

    ``psi`` sends a point of ``|Σ|`` (coordinates on the string) to ``|T|``
    over ``|P|``.  The top map moves weight from ``move[0]`` to ``move[1]``
    by an amount proportional to the first coordinate of the ``Δ^n`` factor;
    the bottom map ``h`` is the endpoint of the same move, defined on all of
    ``|Σ| × |Δ^n|``.
    """

    M: MappingPath
    sigma: tuple
    psi: object
    move: tuple | None

    def g(self, a_sigma, a_delta):
        x = self.psi(a_sigma)
        return (x, self._path(x, a_delta))

    def _path(self, x, a_delta) -> WPath:
        y0 = self.M.fmap(x)
        if self.move is None:
            return const_path(y0)
        return WPath([(ZERO, y0), (ONE, self._moved(y0, a_delta))])

    def _moved(self, y0, a_delta):
        if self.move is None:
            return y0
        u, u2 = self.move
        w = dict(y0)
        amt = _vec(a_delta)[0] * w.get(u, ZERO)
        if amt:
            w[u] -= amt
            w[u2] = w.get(u2, ZERO) + amt
        return _wpoint(w)

    def h(self, a_sigma, a_delta):
        return self._moved(self.M.fmap(self.psi(a_sigma)), a_delta)


def lift_formula(problem: LiftProblem, data: HornRetraction, a_sigma, a_delta):
    """``h~(a) = (g_T(r(a)), t -> piecewise path)``; returns the point and a path evaluator."""
    ra = data.r(a_delta)
    d = data.d(a_delta)
    x, gpath = problem.g(a_sigma, ra)
    cut = 1 / (1 + d)

    def path(t):
        t = _q(t)
        if t <= cut:
            return gpath(t * (1 + d))
        return problem.h(a_sigma, data.H(a_delta, (1 + d) / d * (t - cut)))

    return x, path, cut


def make_lift_problem(f, sigma) -> LiftProblem:
    """Default lifting problem: ``|Σ|`` maps onto a simplex of ``T`` labelled by ``Σ``."""
    M = MappingPath(f)
    X = f.source
    T = X.total
    sigma = tuple(sigma)
    tau = None
    for s in T.nondeg():
        vs = T.vertices(T.nf(s))
        if tuple(X.labels[v] for v in vs) == sigma:
            tau = vs
            break
    if tau is None:
        raise ValueError(f"no simplex of the source is labelled by the string {sigma}")

    def psi(a_sigma):
        return _wpoint(dict(zip(tau, _vec(a_sigma))))

    # Use a move available on the whole image of |Σ|.
    full = M.fmap(psi(tuple(Fraction(1, len(sigma)) for _ in sigma)))
    move = next(iter(M.fiber_moves(full)), None)
    return LiftProblem(M, sigma, psi, move)


def check_lift(f, sigma, data: HornRetraction, grid: int) -> CheckLog:
    """Both triangles of the lifting square commute at every sample point."""
    prob = make_lift_problem(f, sigma)
    M = prob.M
    log = CheckLog()
    tgrid = unit_grid(grid)
    for a_sigma in barycentric_grid(len(sigma) - 1, grid):
        for a_delta in barycentric_grid(data.n, grid):
            x, path, cut = lift_formula(prob, data, a_sigma, a_delta)
            times = sorted(set(tgrid) | {cut})
            # The lift lands in M_B(f).
            pts = [(t, path(t)) for t in times]
            log.record("lift_starts_at_f", pts[0][1] == M.fmap(x), (a_sigma, a_delta))
            b = M.base_T(x)
            log.record("lift_over_B", all(M.base_U(y) == b for _, y in pts), (a_sigma, a_delta))
            # Lower triangle: q_f h~ = h.
            log.record("lower_triangle", path(1) == prob.h(a_sigma, a_delta), (a_sigma, a_delta))
            if in_horn(a_delta, data.k):
                gx, gpath = prob.g(a_sigma, a_delta)
                same = x == gx and all(path(t) == gpath(t) for t in times)
                log.record("upper_triangle", same, (a_sigma, a_delta))
            else:
                # The two pieces meet at the cut.
                left = prob.g(a_sigma, data.r(a_delta))[1](1)
                right = prob.h(a_sigma, data.H(a_delta, 0))
                log.record("pieces_meet", left == right, (a_sigma, a_delta))
    return log


def lift_at_horn_point(problem: LiftProblem, data: HornRetraction, a_sigma, a_delta, t):
    """The lift formula at a horn point, where it reduces to the given top map."""
    if not in_horn(a_delta, data.k):
        raise ValueError("point is not in the horn")
    return lift_formula(problem, data, a_sigma, a_delta)[1](t)

