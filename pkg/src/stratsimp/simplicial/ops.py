"""Monotone maps between ordinals, encoded as tuples.

A monotone map ``[m] -> [n]`` is the tuple of its values.  A normal form is a
pair ``(sid, eta)`` with ``eta`` a surjection onto ``[dim sid]``; the simplex
it names is ``eta^*`` applied to the nondegenerate simplex ``sid``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product


def identity(n: int) -> tuple:
    return tuple(range(n + 1))


def is_identity(t) -> bool:
    return all(v == i for i, v in enumerate(t))


def compose(a, b) -> tuple:
    """The composite ``a o b`` (apply ``b`` first)."""
    return tuple(a[x] for x in b)


def epi_mono(theta) -> tuple[tuple, tuple]:
    """Factor ``theta`` as an injection after a surjection; returns ``(inj, surj)``."""
    image = sorted(set(theta))
    pos = {v: i for i, v in enumerate(image)}
    return tuple(image), tuple(pos[v] for v in theta)


def coface(n: int, i: int) -> tuple:
    """``d^i : [n-1] -> [n]`` skipping ``i``."""
    return tuple(j for j in range(n + 1) if j != i)


def codegeneracy(n: int, j: int) -> tuple:
    """``s^j : [n+1] -> [n]`` hitting ``j`` twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def repeats(eta) -> tuple:
    return tuple(j for j in range(len(eta) - 1) if eta[j] == eta[j + 1])


def surjection_from_repeats(n: int, reps) -> tuple:
    """The surjection out of ``[n]`` whose repeat positions are ``reps``."""
    reps = set(reps)
    out = [0]
    for j in range(n):
        out.append(out[-1] + (0 if j in reps else 1))
    return tuple(out)


def word_of(eta) -> tuple:
    """Degeneracy indices ``i_1 > ... > i_k`` of the Eilenberg-Zilber word."""
    return tuple(sorted(repeats(eta), reverse=True))


def eta_of_word(word, base_dim: int) -> tuple:
    """Inverse of ``word_of``; ``base_dim`` is the dimension of the nondegenerate part."""
    word = tuple(word)
    if any(a <= b for a, b in zip(word, word[1:])):
        raise ValueError(f"degeneracy indices must strictly decrease: {word}")
    n = base_dim + len(word)
    if word and word[0] >= n:
        raise ValueError(f"degeneracy index {word[0]} out of range for dimension {n}")
    return surjection_from_repeats(n, word)


def sections(eta) -> list[tuple]:
    """All injective sections ``delta`` with ``eta o delta = id``."""
    fibres = {}
    for j, v in enumerate(eta):
        fibres.setdefault(v, []).append(j)
    return [tuple(c) for c in product(*(fibres[v] for v in sorted(fibres)))]


@lru_cache(maxsize=None)
def surjections(n: int, d: int) -> tuple:
    """All monotone surjections ``[n] -> [d]`` in lexicographic order."""
    if d > n or d < 0:
        return ()
    out = []
    for reps in combinations(range(n), n - d):
        out.append(surjection_from_repeats(n, reps))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def monotone_maps(m: int, n: int) -> tuple:
    """All monotone maps ``[m] -> [n]``."""
    out = []

    def rec(prefix, lo):
        if len(prefix) == m + 1:
            out.append(tuple(prefix))
            return
        for v in range(lo, n + 1):
            prefix.append(v)
            rec(prefix, v)
            prefix.pop()

    rec([], 0)
    return tuple(out)


def chain_nf(seq) -> tuple:
    """Normal form of a weakly increasing sequence in a nerve whose simplices are chains."""
    seq = tuple(seq)
    base = []
    eta = []
    for v in seq:
        if not base or base[-1] != v:
            base.append(v)
        eta.append(len(base) - 1)
    return tuple(base), tuple(eta)
