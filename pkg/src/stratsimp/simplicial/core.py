"""Finite simplicial sets in Eilenberg-Zilber normal form."""

from __future__ import annotations

from .._util import TruncationError, canon_key, csorted, ident
from .ops import (
    codegeneracy,
    coface,
    compose,
    epi_mono,
    identity,
    is_identity,
    surjections,
)


class SimplicialSet:
    """A finite simplicial set given by its nondegenerate simplices.

    ``simplices`` maps each simplex id to ``(dim, faces)`` where ``faces`` is a
    tuple of ``dim + 1`` normal forms ``(sid, eta)`` (empty for vertices).

    ``trunc_dim`` bounds the dimensions for which the data is authoritative.
    With ``complete=True`` the set has no nondegenerate simplices beyond the
    ones listed, so every dimension is known.  ``cosk`` records a dimension
    ``k`` for which the set is known to be ``k``-coskeletal, when one is known.
    """

    def __init__(
        self,
        simplices: dict,
        trunc_dim: int,
        complete: bool = False,
        name: str | None = None,
        cosk: int | None = None,
        validate: bool = True,
    ):
        self.name = name
        self._dim = {}
        self._faces = {}
        by_dim = {}
        for sid, (d, faces) in simplices.items():
            self._dim[sid] = d
            self._faces[sid] = tuple(faces)
            by_dim.setdefault(d, []).append(sid)
        self._by_dim = {d: tuple(csorted(v)) for d, v in by_dim.items()}
        self.dim = max(by_dim) if by_dim else -1
        if complete:
            trunc_dim = max(trunc_dim, self.dim)
        self.trunc_dim = trunc_dim
        self.complete = complete
        self.cosk = cosk
        self._face_cache = {}
        self._bindex = {}
        if validate:
            self.validate()
        if complete and cosk is None and self.vertex_determined():
            # A map from ∂Δ^n with n >= dim + 2 is fixed by its vertices and
            # its vertex sequence must repeat consecutively, so it extends.
            self.cosk = max(self.dim + 1, 0)

    # -- basic access ------------------------------------------------------
    def __repr__(self) -> str:
        tag = "complete" if self.complete else f"trunc {self.trunc_dim}"
        return f"SimplicialSet({self.name or '?'}, counts={self.counts()}, {tag})"

    def __contains__(self, sid) -> bool:
        return sid in self._dim

    def nondeg(self, n: int | None = None) -> tuple:
        if n is None:
            return tuple(s for d in sorted(self._by_dim) for s in self._by_dim[d])
        return self._by_dim.get(n, ())

    def vertices_ids(self) -> tuple:
        return self.nondeg(0)

    def dim_of(self, sid) -> int:
        return self._dim[sid]

    def faces(self, sid) -> tuple:
        return self._faces[sid]

    def counts(self) -> tuple:
        return tuple(len(self.nondeg(d)) for d in range(self.dim + 1))

    def size(self) -> int:
        return len(self._dim)

    def is_empty(self) -> bool:
        return not self._dim

    def known(self, n: int) -> bool:
        return self.complete or n <= self.trunc_dim

    def require(self, n: int, what: str) -> None:
        if not self.known(n):
            raise TruncationError(f"{what} on {self.name or 'a simplicial set'}", n, self.trunc_dim)

    def data(self) -> dict:
        return {s: (self._dim[s], self._faces[s]) for s in self.nondeg()}

    # -- operators ---------------------------------------------------------
    @staticmethod
    def nf_dim(nf) -> int:
        return len(nf[1]) - 1

    def nf(self, sid) -> tuple:
        return (sid, identity(self._dim[sid]))

    def face_op(self, sid, delta) -> tuple:
        """The face of ``sid`` spanned by the increasing vertex indices ``delta``."""
        d = self._dim[sid]
        delta = tuple(delta)
        if len(delta) == d + 1:
            return (sid, delta)
        key = (sid, delta)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        present = set(delta)
        j = next(i for i in range(d + 1) if i not in present)
        shifted = tuple(i if i < j else i - 1 for i in delta)
        out = self.apply(self._faces[sid][j], shifted)
        self._face_cache[key] = out
        return out

    def apply(self, nf, theta) -> tuple:
        """The simplicial operator ``theta^*`` applied to the normal form ``nf``."""
        sid, eta = nf
        c = compose(eta, theta)
        inj, surj = epi_mono(c)
        fsid, feta = self.face_op(sid, inj)
        return (fsid, compose(feta, surj))

    def face(self, nf, i: int) -> tuple:
        return self.apply(nf, coface(self.nf_dim(nf), i))

    def degen(self, nf, j: int) -> tuple:
        return self.apply(nf, codegeneracy(self.nf_dim(nf), j))

    def boundary(self, nf) -> tuple:
        n = self.nf_dim(nf)
        if n == 0:
            return ()
        return tuple(self.face(nf, i) for i in range(n + 1))

    def vertex(self, nf, i: int):
        return self.apply(nf, (i,))[0]

    def vertices(self, nf) -> tuple:
        return tuple(self.vertex(nf, i) for i in range(self.nf_dim(nf) + 1))

    def simplices(self, n: int) -> list:
        """All ``n``-simplices, degenerate ones included, as normal forms."""
        self.require(n, "listing simplices")
        out = []
        for d in range(min(n, self.dim) + 1):
            for sid in self.nondeg(d):
                for eta in surjections(n, d):
                    out.append((sid, eta))
        return out

    def boundary_index(self, n: int) -> dict:
        """Boundary tuple -> nondegenerate ``n``-simplices with that boundary."""
        idx = self._bindex.get(n)
        if idx is None:
            idx = {}
            for sid in self.nondeg(n):
                idx.setdefault(self.boundary(self.nf(sid)), []).append(sid)
            self._bindex[n] = idx
        return idx

    def fillers(self, bnd) -> list:
        """All ``n``-simplices (normal forms) with the given boundary, ``n >= 1``."""
        n = len(bnd) - 1
        self.require(n, "filling a boundary")
        out = [self.nf(s) for s in self.boundary_index(n).get(tuple(bnd), ())]
        seen = set()
        for j in range(n):
            if bnd[j] == bnd[j + 1]:
                cand = self.degen(bnd[j], j)
                if cand not in seen and self.boundary(cand) == tuple(bnd):
                    seen.add(cand)
                    out.append(cand)
        return out

    def vertex_determined(self) -> bool:
        """Nondegenerate simplices have distinct vertices and distinct vertex tuples."""
        seen = set()
        for sid in self.nondeg():
            vs = self.vertices(self.nf(sid))
            if len(set(vs)) != len(vs) or vs in seen:
                return False
            seen.add(vs)
        return True

    def is_degenerate(self, nf) -> bool:
        return not is_identity(nf[1])

    # -- derived objects -----------------------------------------------------
    def closure(self, sids) -> set:
        """Nondegenerate simplices generated by ``sids`` under faces."""
        out = set()
        stack = list(sids)
        while stack:
            s = stack.pop()
            if s in out:
                continue
            out.add(s)
            for f in self._faces[s]:
                stack.append(f[0])
        return out

    def subobject(self, sids, name=None) -> "SimplicialSet":
        keep = self.closure(sids)
        return SimplicialSet(
            {s: (self._dim[s], self._faces[s]) for s in keep},
            self.trunc_dim,
            complete=self.complete,
            name=name,
            validate=False,
        )

    def renamed(self, name) -> "SimplicialSet":
        return SimplicialSet(
            self.data(), self.trunc_dim, self.complete, name=name, cosk=self.cosk, validate=False
        )

    def truncated(self, n: int, name=None) -> "SimplicialSet":
        """Forget everything above dimension ``n``."""
        keep = {s: v for s, v in self.data().items() if v[0] <= n}
        complete = self.complete and self.dim <= n
        return SimplicialSet(keep, n, complete, name=name or self.name, validate=False)

    # -- validation ----------------------------------------------------------
    def validate(self) -> None:
        for sid in self.nondeg():
            d = self._dim[sid]
            faces = self._faces[sid]
            if d > self.trunc_dim and not self.complete:
                raise ValueError(f"simplex {ident(sid)} of dimension {d} exceeds trunc {self.trunc_dim}")
            if d == 0:
                if faces:
                    raise ValueError(f"vertex {ident(sid)} must have no faces")
                continue
            if len(faces) != d + 1:
                raise ValueError(f"simplex {ident(sid)} of dimension {d} needs {d + 1} faces")
            for i, (fs, eta) in enumerate(faces):
                if fs not in self._dim:
                    raise ValueError(f"face {i} of {ident(sid)} names unknown simplex {ident(fs)}")
                if len(eta) != d:
                    raise ValueError(f"face {i} of {ident(sid)} has the wrong dimension")
                fd = self._dim[fs]
                if eta[0] != 0 or eta[-1] != fd or any(
                    b - a not in (0, 1) for a, b in zip(eta, eta[1:])
                ):
                    raise ValueError(f"face {i} of {ident(sid)} has a malformed degeneracy")
        for sid in self.nondeg():
            d = self._dim[sid]
            if d < 2:
                continue
            nf = self.nf(sid)
            for j in range(d + 1):
                for i in range(j):
                    lhs = self.face(self.face(nf, j), i)
                    rhs = self.face(self.face(nf, i), j - 1)
                    if lhs != rhs:
                        raise ValueError(
                            f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on {ident(sid)}"
                        )


class SimplicialMap:
    """A map given on nondegenerate simplices by normal forms in the target."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet, assignment: dict, validate=True):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        if validate:
            self.validate()

    def __call__(self, nf):
        sid, eta = nf
        return self.target.apply(self.assignment[sid], eta)

    def __getitem__(self, sid):
        return self.assignment[sid]

    def key(self) -> tuple:
        return tuple(self.assignment[s] for s in self.source.nondeg())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialMap) and self.assignment == other.assignment

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SimplicialMap({self.source.name} -> {self.target.name}, {len(self.assignment)} simplices)"

    def validate(self) -> None:
        src, tgt = self.source, self.target
        for sid in src.nondeg():
            if sid not in self.assignment:
                raise ValueError(f"map leaves simplex {ident(sid)} unassigned")
            img = self.assignment[sid]
            if img[0] not in tgt or SimplicialSet.nf_dim(img) != src.dim_of(sid):
                raise ValueError(f"image of {ident(sid)} is not a simplex of matching dimension")
            if tgt.dim_of(img[0]) > len(img[1]) - 1 or tuple(sorted(set(img[1]))) != identity(
                tgt.dim_of(img[0])
            ):
                raise ValueError(f"image of {ident(sid)} is not in normal form")
        for sid in src.nondeg():
            d = src.dim_of(sid)
            if d == 0:
                continue
            nf = src.nf(sid)
            for i in range(d + 1):
                if tgt.face(self.assignment[sid], i) != self(src.face(nf, i)):
                    raise ValueError(f"map does not commute with d_{i} on {ident(sid)}")

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """``other o self``."""
        return SimplicialMap(
            self.source,
            other.target,
            {s: other(self.assignment[s]) for s in self.source.nondeg()},
            validate=False,
        )

    def is_injective(self) -> bool:
        """Injective on all simplices: nondegenerate to distinct nondegenerate."""
        imgs = list(self.assignment.values())
        return all(is_identity(e) for _, e in imgs) and len({s for s, _ in imgs}) == len(imgs)

    def is_iso(self) -> bool:
        return self.is_injective() and len(self.assignment) == self.target.size()

    def image(self) -> set:
        return {s for s, _ in self.assignment.values()}


def identity_map(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {s: X.nf(s) for s in X.nondeg()}, validate=False)


def inclusion(A: SimplicialSet, X: SimplicialSet) -> SimplicialMap:
    """Inclusion of a simplicial subset sharing simplex ids."""
    return SimplicialMap(A, X, {s: X.nf(s) for s in A.nondeg()})


def empty_set(name="empty") -> SimplicialSet:
    return SimplicialSet({}, 0, complete=True, name=name)


def nf_key(nf):
    return canon_key(nf)
