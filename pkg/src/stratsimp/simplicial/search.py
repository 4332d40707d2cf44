"""Backtracking search for simplicial maps: lifts, isomorphisms, enumerations."""

from __future__ import annotations

from .._util import Budget, TruncationError, canon_key, csorted
from .core import SimplicialMap, SimplicialSet


def search_order(B: SimplicialSet, first=()) -> list:
    """Order nondegenerate simplices so each comes after its faces.

    Vertices are visited breadth-first along edges (starting from ``first``);
    after each vertex every simplex whose vertices are all visited is added.
    """
    verts = {s: set(B.vertices(B.nf(s))) for s in B.nondeg()}
    adj = {v: set() for v in B.nondeg(0)}
    waiting = {v: [] for v in B.nondeg(0)}
    missing = {}
    for s in B.nondeg():
        if B.dim_of(s) == 0:
            continue
        missing[s] = len(verts[s])
        for v in verts[s]:
            waiting[v].append(s)
        if B.dim_of(s) == 1:
            vs = sorted(verts[s], key=canon_key)
            adj[vs[0]].add(vs[-1])
            adj[vs[-1]].add(vs[0])
    seen, order = set(), []
    for root in [v for v in first if v in adj] + list(B.nondeg(0)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            ready = []
            for s in waiting[v]:
                missing[s] -= 1
                if missing[s] == 0:
                    ready.append(s)
            ready.sort(key=lambda s: (B.dim_of(s), canon_key(s)))
            order.extend(ready)
            for w in csorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


class MapSearch:
    """Enumerate maps ``B -> X`` subject to fixed values and a predicate.

    ``fixed`` pins images of some nondegenerate simplices of ``B``;
    ``allowed(sid, nf)`` filters candidates; ``injective`` requires distinct
    nondegenerate images (used for isomorphism search); ``colors`` optionally
    restricts candidates of each simplex to target simplices of equal color.
    """

    def __init__(
        self,
        B: SimplicialSet,
        X: SimplicialSet,
        fixed=None,
        allowed=None,
        budget: Budget | None = None,
        nondeg_only=False,
        injective=False,
        colors=None,
        order=None,
    ):
        self.B, self.X = B, X
        self.fixed = dict(fixed or {})
        self.allowed = allowed
        self.budget = budget or Budget()
        self.nondeg_only = nondeg_only
        self.injective = injective
        self.colors = colors
        top = B.dim
        if top >= 0 and not X.known(top):
            raise TruncationError("map search", top, X.trunc_dim)
        self.order = order or search_order(B)
        self.vertices_x = X.nondeg(0)

    def candidates(self, sid, asg):
        B, X = self.B, self.X
        if sid in self.fixed:
            cands = [self.fixed[sid]]
        else:
            d = B.dim_of(sid)
            if d == 0:
                cands = [(v, (0,)) for v in self.vertices_x]
            else:
                bnd = tuple(
                    X.apply(asg[fs], feta) for fs, feta in B.faces(sid)
                )
                if self.nondeg_only:
                    cands = [X.nf(s) for s in X.boundary_index(d).get(bnd, ())]
                else:
                    cands = X.fillers(bnd)
            if self.colors is not None:
                want = self.colors[0][sid]
                cands = [c for c in cands if self.colors[1].get(c[0]) == want]
        if self.allowed is not None:
            cands = [c for c in cands if self.allowed(sid, c)]
        return cands

    def __iter__(self):
        B, X = self.B, self.X
        order = self.order
        asg = {}
        used = set()

        def check_fixed(sid, nf):
            if B.dim_of(sid) == 0:
                return True
            return X.boundary(nf) == tuple(X.apply(asg[fs], feta) for fs, feta in B.faces(sid))

        n = len(order)
        if n == 0:
            yield SimplicialMap(B, X, {}, validate=False)
            return
        iters = [None] * n
        pos = 0
        iters[0] = iter(self.candidates(order[0], asg))
        while pos >= 0:
            sid = order[pos]
            if sid in asg:
                if self.injective:
                    used.discard(asg[sid][0])
                del asg[sid]
            advanced = False
            for cand in iters[pos]:
                self.budget.spend()
                if self.injective and cand[0] in used:
                    continue
                if sid in self.fixed and not check_fixed(sid, cand):
                    continue
                asg[sid] = cand
                if self.injective:
                    used.add(cand[0])
                advanced = True
                break
            if not advanced:
                pos -= 1
                continue
            if pos == n - 1:
                yield SimplicialMap(B, X, dict(asg), validate=False)
                continue
            pos += 1
            iters[pos] = iter(self.candidates(order[pos], asg))


def enumerate_maps(B, X, fixed=None, allowed=None, budget=None, limit=None):
    out = []
    for f in MapSearch(B, X, fixed=fixed, allowed=allowed, budget=budget):
        out.append(f)
        if limit is not None and len(out) >= limit:
            break
    return out


def first_map(B, X, fixed=None, allowed=None, budget=None):
    for f in MapSearch(B, X, fixed=fixed, allowed=allowed, budget=budget):
        return f
    return None


def has_lift(i: SimplicialMap, p: SimplicialMap, top: SimplicialMap, bottom: SimplicialMap, budget=None):
    """Search for ``h : B -> X`` with ``h i = top`` and ``p h = bottom``.

    Returns the lift or ``None`` when none exists.  Raises ``BudgetExceeded``
    or ``TruncationError`` (both ``Undetermined``) when the search cannot be
    completed.
    """
    A, B = i.source, i.target
    X = p.source
    for sid in A.nondeg():
        if top(A.nf(sid)) is None:
            raise ValueError("top map is incomplete")
    for sid in A.nondeg():
        if p(top.assignment[sid]) != bottom(i.assignment[sid]):
            raise ValueError("the lifting square does not commute")
    fixed = {}
    extra = []
    for sid in A.nondeg():
        img = i.assignment[sid]
        if img[1] == tuple(range(len(img[1]))) and A.dim_of(sid) == B.dim_of(img[0]):
            if img[0] in fixed and fixed[img[0]] != top.assignment[sid]:
                return None
            fixed[img[0]] = top.assignment[sid]
        else:
            extra.append(sid)

    def allowed(sid, nf):
        return p(nf) == bottom.assignment[sid]

    for h in MapSearch(B, X, fixed=fixed, allowed=allowed, budget=budget):
        if all(h(i.assignment[s]) == top.assignment[s] for s in extra):
            return h
    return None


# -- isomorphism ---------------------------------------------------------------

def _refine_colors(X: SimplicialSet, rounds: int = 4, labels=None) -> dict:
    colors = {s: (X.dim_of(s),) for s in X.nondeg()}
    if labels is not None:
        for v in X.nondeg(0):
            colors[v] = (0, repr(canon_key(labels[v])))
    cofaces = {s: [] for s in X.nondeg()}
    for s in X.nondeg():
        for i, (fs, eta) in enumerate(X.faces(s)):
            cofaces[fs].append((i, eta, s))
    for _ in range(rounds):
        new = {}
        for s in X.nondeg():
            down = tuple((colors[fs], eta) for fs, eta in X.faces(s))
            up = tuple(sorted(repr((i, eta, colors[t])) for i, eta, t in cofaces[s]))
            new[s] = hash((colors[s], down, up))
        colors = new
    return colors


def iso_check(X: SimplicialSet, Y: SimplicialSet, hint=None, budget=None, labels=None):
    """An isomorphism ``X -> Y`` or ``None``.

    Compares the data in every dimension known for both sets; when both are
    complete the answer concerns the full simplicial sets.  ``labels`` is an
    optional pair of vertex-label dicts that the isomorphism must respect.
    """
    top = X.dim if X.complete else X.trunc_dim
    top_y = Y.dim if Y.complete else Y.trunc_dim
    if X.complete != Y.complete:
        limit = min(top, top_y)
    else:
        limit = max(top, top_y) if X.complete else min(top, top_y)
    Xc = X if X.dim <= limit else X.truncated(limit)
    Yc = Y if Y.dim <= limit else Y.truncated(limit)
    if Xc.counts() != Yc.counts():
        return None
    if hint is not None:
        try:
            f = SimplicialMap(Xc, Yc, hint)
            if f.is_iso() and (labels is None or all(
                labels[0][v] == labels[1][f.assignment[v][0]] for v in Xc.nondeg(0)
            )):
                return f
        except (ValueError, KeyError):
            pass
    lx, ly = labels if labels is not None else (None, None)
    cx, cy = _refine_colors(Xc, labels=lx), _refine_colors(Yc, labels=ly)
    # The color invariants are computed with the same hash on both sides.
    if sorted(cx.values()) != sorted(cy.values()):
        return None
    order = _iso_order(Xc, cx)
    search = MapSearch(
        Xc, Yc, budget=budget, nondeg_only=True, injective=True, colors=(cx, cy), order=order
    )
    for f in search:
        return f
    return None


def _iso_order(X: SimplicialSet, colors) -> list:
    """Top-down order: high simplices first with their faces inserted just before them."""
    order, placed = [], set()

    def place(s):
        if s in placed:
            return
        for fs, _ in X.faces(s):
            place(fs)
        placed.add(s)
        order.append(s)

    freq = {}
    for c in colors.values():
        freq[c] = freq.get(c, 0) + 1
    for d in range(X.dim, -1, -1):
        for s in sorted(X.nondeg(d), key=lambda s: (freq[colors[s]], canon_key(s))):
            place(s)
    return order
