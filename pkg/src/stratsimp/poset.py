"""Finite posets, strings, subdivisions, pair posets and Alexandroff opens.

A *string* of a poset is a nonempty chain, stored as a tuple listed in
increasing order.  Strings are the indexing objects for everything
downstream: they are the nondegenerate simplices of the nerve, the objects
of the subdivision, and the arguments of presheaves.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

from ._util import csorted

PString = tuple

__all__ = [
    "PString",
    "Poset",
    "all_posets",
    "alexandroff_opens",
    "antichain",
    "chain",
    "is_alexandroff_open",
    "monotone_tuples",
    "pair_poset",
    "pair_sigma",
    "point",
    "subdivision",
]


class Poset:
    """A finite partial order.

    ``relations`` are generating pairs ``(a, b)`` meaning ``a <= b``; the
    reflexive-transitive closure is computed on construction and cycles are
    rejected.
    """

    def __init__(self, elements, relations=(), name: str | None = None):
        elems = csorted(set(elements))
        index = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        up = [{i} for i in range(n)]
        for a, b in relations:
            if a not in index or b not in index:
                raise ValueError(f"relation {a!r} <= {b!r} mentions an unknown element")
            up[index[a]].add(index[b])
        # Warshall closure on index sets.
        for k in range(n):
            for i in range(n):
                if k in up[i]:
                    up[i] |= up[k]
        for i in range(n):
            for j in up[i]:
                if j != i and i in up[j]:
                    raise ValueError(
                        f"relations contain a cycle through {elems[i]!r} and {elems[j]!r}"
                    )
        self.name = name
        self.elements: tuple = tuple(elems)
        self._index = index
        self._up = [frozenset(s) for s in up]
        self._leq = frozenset((elems[i], elems[j]) for i in range(n) for j in up[i])

    # -- basic queries ---------------------------------------------------
    def __contains__(self, x) -> bool:
        return x in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.elements == other.elements and self._leq == other._leq

    def __hash__(self) -> int:
        return hash((self.elements, self._leq))

    def __repr__(self) -> str:
        rel = ", ".join(f"{a}<{b}" for a, b in self.covers())
        return f"Poset({list(self.elements)}; {rel})"

    def check(self, x) -> None:
        if x not in self._index:
            raise ValueError(f"{x!r} is not an element of {self.name or 'the poset'}")

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self._leq

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def relation_pairs(self):
        """All pairs ``(a, b)`` with ``a <= b`` in canonical order."""
        return csorted(self._leq)

    def covers(self):
        """Covering relations ``a < b`` with nothing strictly in between."""
        out = []
        for a, b in self.relation_pairs():
            if a == b:
                continue
            if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                out.append((a, b))
        return out

    def up_set(self, x):
        return frozenset(self.elements[j] for j in self._up[self._index[x]])

    # -- strings ---------------------------------------------------------
    def is_chain(self, elems) -> bool:
        elems = list(elems)
        return all(self.comparable(a, b) for a, b in combinations(elems, 2))

    def string(self, elems) -> PString:
        """Normalise a collection of pairwise comparable elements to a string."""
        elems = set(elems)
        if not elems:
            raise ValueError("a string must be nonempty")
        for e in elems:
            self.check(e)
        if not self.is_chain(elems):
            raise ValueError(f"{csorted(elems)!r} is not totally ordered")
        return tuple(sorted(elems, key=lambda e: sum(1 for f in elems if self.leq(f, e))))

    def is_monotone_tuple(self, labels) -> bool:
        return all(self.leq(a, b) for a, b in zip(labels, labels[1:]))

    def strings(self, max_len: int | None = None) -> list:
        """All strings of length ``<= max_len`` ordered by length, then canonically."""
        if max_len is not None and max_len < 1:
            raise ValueError("max_len must be positive")
        top = len(self.elements) if max_len is None else min(max_len, len(self.elements))
        out = []
        for size in range(1, top + 1):
            level = []
            for combo in combinations(self.elements, size):
                if self.is_chain(combo):
                    level.append(self.string(combo))
            out.extend(csorted(level))
        return out

    def sub(self, elems, name=None) -> "Poset":
        """Full subposet on ``elems``."""
        elems = set(elems)
        rel = [(a, b) for a, b in self._leq if a in elems and b in elems]
        return Poset(elems, rel, name=name)

    def opposite(self, name=None) -> "Poset":
        return Poset(self.elements, [(b, a) for a, b in self._leq], name=name)


# -- constructions ----------------------------------------------------------

def chain(n: int, name: str | None = None) -> Poset:
    """The linear order ``[n] = {0 < 1 < ... < n}`` on string identifiers."""
    elems = [str(i) for i in range(n + 1)]
    return Poset(elems, list(zip(elems, elems[1:])), name=name or f"[{n}]")


def antichain(elems, name: str | None = None) -> Poset:
    return Poset(elems, (), name=name)


def point(name: str | None = None) -> Poset:
    return Poset(["*"], (), name=name or "pt")


def subdivision(P: Poset) -> Poset:
    """sd(P): strings of P ordered by containment."""
    strs = P.strings()
    sets = {s: frozenset(s) for s in strs}
    rel = [(s, t) for s in strs for t in strs if s != t and sets[s] <= sets[t]]
    return Poset(strs, rel)


def pair_poset(P: Poset) -> Poset:
    """Pair(P): pairs (S, S') of strings with S' inside S.

    (S, S') <= (T, T') iff S contains T and S' is contained in T'.
    """
    strs = P.strings()
    elems = [(s, t) for s in strs for t in strs if set(t) <= set(s)]
    rel = []
    for a in elems:
        for b in elems:
            if a != b and set(a[0]) >= set(b[0]) and set(a[1]) <= set(b[1]):
                rel.append((a, b))
    return Poset(elems, rel)


def pair_sigma(P: Poset, sigma) -> tuple[Poset, dict]:
    """Pair_Σ(P) together with its reflection onto Pair(Σ).

    Returns the subposet of pairs (S, S') with S' inside Σ and a dict sending
    each element to ``(adjoint_value, unit)`` where the adjoint value is
    (S ∩ Σ, S') and ``unit`` is the comparison ``(element, adjoint_value)``,
    which always holds in the order.
    """
    sigma = P.string(sigma)
    sset = set(sigma)
    full = pair_poset(P)
    elems = [e for e in full.elements if set(e[1]) <= sset]
    sub = full.sub(elems)
    witness = {}
    for S, S1 in elems:
        meet = [x for x in S if x in sset]
        assert meet, "S' is a nonempty subset of S ∩ Σ"
        adj = (P.string(meet), S1)
        assert sub.leq((S, S1), adj)
        witness[(S, S1)] = (adj, ((S, S1), adj))
    return sub, witness


def is_alexandroff_open(P: Poset, U) -> bool:
    """True iff U is upward closed."""
    U = set(U)
    for x in U:
        P.check(x)
    return all(P.up_set(x) <= U for x in U)


def alexandroff_opens(P: Poset) -> list:
    out = []
    for r in range(len(P) + 1):
        for combo in combinations(P.elements, r):
            if is_alexandroff_open(P, combo):
                out.append(frozenset(combo))
    return out


def monotone_tuples(P: Poset, length: int) -> list:
    """All weakly increasing tuples of the given length."""
    out = []
    for tup in product(P.elements, repeat=length):
        if P.is_monotone_tuple(tup):
            out.append(tup)
    return csorted(out)


def all_posets(n: int) -> list[Poset]:
    """Representatives of the isomorphism classes of posets with ``n`` elements."""
    elems = [str(i) for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        rel = {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        canon = min(
            tuple(sorted((perm[a], perm[b]) for a, b in rel)) for perm in permutations(range(n))
        )
        if canon in seen:
            continue
        seen.add(canon)
        out.append(Poset(elems, [(str(a), str(b)) for a, b in canon], name=f"P{n}_{len(out)}"))
    return out
