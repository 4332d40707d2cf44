"""Finite categories, their presentations, and their nerves.

Words are composable sequences of generators read in diagrammatic order:
``(f, g)`` means "first ``f``, then ``g``".
"""

from __future__ import annotations

from .._util import csorted
from .core import SimplicialSet

INV = "^-1"


class FiniteCategory:
    """A finite category given by an explicit composition table.

    ``morphisms`` maps a name to ``(source, target)``; ``ids`` maps each
    object to its identity morphism name; ``comp`` maps ``(f, g)`` with
    ``target(f) == source(g)`` to the name of "``f`` then ``g``".
    """

    def __init__(self, objects, morphisms: dict, ids: dict, comp: dict, name=None, validate=True):
        self.name = name
        self.objects = tuple(csorted(objects))
        self.morphisms = dict(morphisms)
        self.ids = dict(ids)
        self.comp = dict(comp)
        self._is_id = set(self.ids.values())
        if validate:
            self.validate()

    def __repr__(self):
        return f"FiniteCategory({self.name or '?'}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def src(self, f):
        return self.morphisms[f][0]

    def tgt(self, f):
        return self.morphisms[f][1]

    def is_identity(self, f) -> bool:
        return f in self._is_id

    def then(self, f, g):
        return self.comp[(f, g)]

    def hom(self, x, y) -> list:
        return csorted(f for f, (s, t) in self.morphisms.items() if s == x and t == y)

    def nonidentity(self) -> list:
        return csorted(f for f in self.morphisms if f not in self._is_id)

    def inverse(self, f):
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.then(f, g) == self.ids[self.src(f)] and self.then(g, f) == self.ids[self.tgt(f)]:
                return g
        return None

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def validate(self) -> None:
        for x in self.objects:
            i = self.ids.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                raise ValueError(f"object {x!r} lacks an identity")
        for f, (s, t) in self.morphisms.items():
            if s not in self.objects or t not in self.objects:
                raise ValueError(f"morphism {f!r} has an unknown endpoint")
            if self.comp.get((self.ids[s], f)) != f or self.comp.get((f, self.ids[t])) != f:
                raise ValueError(f"identity laws fail at {f!r}")
        for f, (s, t) in self.morphisms.items():
            for g in self.hom_from(t):
                fg = self.comp.get((f, g))
                if fg is None or self.morphisms[fg] != (s, self.tgt(g)):
                    raise ValueError(f"composite of {f!r} and {g!r} is missing or mistyped")
        for f in self.morphisms:
            for g in self.hom_from(self.tgt(f)):
                for h in self.hom_from(self.tgt(g)):
                    if self.comp[(self.comp[(f, g)], h)] != self.comp[(f, self.comp[(g, h)])]:
                        raise ValueError(f"composition is not associative on {f!r}, {g!r}, {h!r}")

    def hom_from(self, x) -> list:
        return csorted(f for f, (s, _) in self.morphisms.items() if s == x)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_poset(cls, P, name=None) -> "FiniteCategory":
        morph = {(a, b): (a, b) for a, b in P.relation_pairs()}
        ids = {a: (a, a) for a in P.elements}
        comp = {}
        for a, b in morph:
            for b2, c in morph:
                if b == b2:
                    comp[((a, b), (b2, c))] = (a, c)
        return cls(P.elements, morph, ids, comp, name=name or P.name)

    @classmethod
    def from_preorder(cls, objects, leq_pairs, name=None) -> "FiniteCategory":
        """Thin category on a preorder; ``leq_pairs`` generate it reflexively and transitively."""
        objects = csorted(set(objects))
        rel = {(a, a) for a in objects} | set(leq_pairs)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for b2, c in list(rel):
                    if b == b2 and (a, c) not in rel:
                        rel.add((a, c))
                        changed = True
        morph = {(a, b): (a, b) for a, b in rel}
        ids = {a: (a, a) for a in objects}
        comp = {((a, b), (b, c)): (a, c) for a, b in rel for b2, c in rel if b == b2}
        return cls(objects, morph, ids, comp, name=name)

    @classmethod
    def from_group(cls, elements, mult, unit, obj="*", name=None) -> "FiniteCategory":
        """One-object category of a finite group; ``mult(g, h)`` is "``g`` then ``h``"."""
        morph = {g: (obj, obj) for g in elements}
        comp = {(g, h): mult(g, h) for g in elements for h in elements}
        return cls([obj], morph, {obj: unit}, comp, name=name)

    @classmethod
    def from_presentation(
        cls,
        objects,
        generators: dict,
        relations=(),
        invertible=(),
        name=None,
        max_word_len: int = 12,
        max_rules: int = 400,
    ) -> "FiniteCategory":
        """Category presented by generators and relations.

        Generators listed in ``invertible`` get formal inverses named
        ``g^-1``.  Relations are pairs of words; an empty word stands for the
        identity and must be paired with a word that is an endomorphism.  Word
        normalization uses bounded Knuth-Bendix completion under the shortlex
        order; if completion or enumeration of normal forms does not finish
        within the bounds a ``ValueError`` is raised.
        """
        gens = dict(generators)
        for g in invertible:
            s, t = gens[g]
            gens[g + INV] = (t, s)
        order = {g: i for i, g in enumerate(csorted(gens))}
        rels = []
        for g in invertible:
            rels.append(((g, g + INV), ()))
            rels.append(((g + INV, g), ()))
        for lhs, rhs in relations:
            rels.append((tuple(lhs), tuple(rhs)))
        rules = _knuth_bendix(rels, order, max_rules, max_word_len)

        def reduce(w):
            return _reduce(tuple(w), rules)

        # Enumerate irreducible typed words by length.
        objects = csorted(objects)
        frontier = [((), x, x) for x in objects]
        elements = set(frontier)
        length = 0
        while frontier:
            length += 1
            if length > max_word_len:
                raise ValueError(
                    f"presentation {name or ''} has normal forms longer than {max_word_len}; "
                    "the category may be infinite"
                )
            nxt = []
            for w, s, t in frontier:
                for g in csorted(gens):
                    if gens[g][0] != t:
                        continue
                    w2 = w + (g,)
                    if reduce(w2) != w2:
                        continue
                    item = (w2, s, gens[g][1])
                    if item not in elements:
                        elements.add(item)
                        nxt.append(item)
            frontier = nxt

        def mname(w, s):
            return "id_" + str(s) if not w else ".".join(w)

        morph = {}
        ids = {x: mname((), x) for x in objects}
        for w, s, t in elements:
            morph[mname(w, s)] = (s, t)
        lookup = {(w, s): mname(w, s) for w, s, _ in elements}
        comp = {}
        for w1, s1, t1 in elements:
            for w2, s2, t2 in elements:
                if s2 != t1:
                    continue
                w = reduce(w1 + w2)
                key = (w, s1)
                if key not in lookup:
                    raise ValueError("normal form closure failed; completion is incomplete")
                comp[(mname(w1, s1), mname(w2, s2))] = lookup[key]
        return cls(objects, morph, ids, comp, name=name)


def _shortlex_key(w, order):
    return (len(w), tuple(order[g] for g in w))


def _reduce(w, rules):
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            n = len(lhs)
            for i in range(len(w) - n + 1):
                if w[i:i + n] == lhs:
                    w = w[:i] + rhs + w[i + n:]
                    changed = True
                    break
            if changed:
                break
    return w


def _knuth_bendix(rels, order, max_rules, max_word_len):
    def orient(a, b):
        if a == b:
            return None
        if _shortlex_key(a, order) > _shortlex_key(b, order):
            return (a, b)
        return (b, a)

    rules = []
    pending = [r for r in (orient(a, b) for a, b in rels) if r is not None]

    def interreduce(rs):
        out = []
        for i, (l, r) in enumerate(rs):
            others = rs[:i] + rs[i + 1:]
            l2 = _reduce(l, others)
            r2 = _reduce(r, out + others)
            if l2 != l:
                pending.append((l2, r2))
                continue
            out.append((l, r2))
        return out

    while True:
        while pending:
            a, b = pending.pop(0)
            a, b = _reduce(a, rules), _reduce(b, rules)
            rule = orient(a, b)
            if rule is None:
                continue
            if len(rule[0]) > max_word_len:
                raise ValueError("Knuth-Bendix completion exceeded the word length bound")
            rules.append(rule)
            rules = interreduce(rules)
            if len(rules) > max_rules:
                raise ValueError("Knuth-Bendix completion exceeded the rule bound")
        # Critical pairs from overlaps.
        new = []
        for l1, r1 in rules:
            for l2, r2 in rules:
                for k in range(1, min(len(l1), len(l2)) + 1):
                    if l1[len(l1) - k:] == l2[:k]:
                        a = _reduce(r1 + l2[k:], rules)
                        b = _reduce(l1[:len(l1) - k] + r2, rules)
                        if a != b:
                            new.append((a, b))
                if l1 != l2:
                    n1, n2 = len(l1), len(l2)
                    for i in range(n1 - n2 + 1):
                        if l1[i:i + n2] == l2:
                            a = _reduce(r1, rules)
                            b = _reduce(l1[:i] + r2 + l1[i + n2:], rules)
                            if a != b:
                                new.append((a, b))
        if not new:
            return sorted(rules, key=lambda r: _shortlex_key(r[0], order))
        pending.extend(new)


# -- nerves -------------------------------------------------------------------

def _longest_chain(C: FiniteCategory):
    """Length of the longest chain of nonidentity arrows, or None if unbounded."""
    succ = {x: set() for x in C.objects}
    for f in C.nonidentity():
        succ[C.src(f)].add(C.tgt(f))
    memo, state = {}, {}

    def depth(x):
        if state.get(x) == 1:
            raise _Cycle
        if x in memo:
            return memo[x]
        state[x] = 1
        best = 0
        for y in succ[x]:
            best = max(best, 1 + depth(y))
        state[x] = 2
        memo[x] = best
        return best

    try:
        return max((depth(x) for x in C.objects), default=0)
    except _Cycle:
        return None


class _Cycle(Exception):
    pass


def chain_face(C: FiniteCategory, chain, i: int):
    """``d_i`` of a composable chain ``(f_1, ..., f_n)``, as a chain."""
    n = len(chain)
    if i == 0:
        return chain[1:]
    if i == n:
        return chain[:-1]
    return chain[: i - 1] + (C.then(chain[i - 1], chain[i]),) + chain[i + 1:]


def chain_normal_form(C: FiniteCategory, chain, start):
    """Normal form of a chain possibly containing identities.

    Vertices are object names; higher simplices are tuples of nonidentity arrows.
    """
    kept = tuple(f for f in chain if not C.is_identity(f))
    eta = [0]
    for f in chain:
        eta.append(eta[-1] + (0 if C.is_identity(f) else 1))
    sid = kept if kept else start
    return (sid, tuple(eta))


def nerve(C: FiniteCategory, trunc_dim: int, name=None) -> SimplicialSet:
    """Nerve of ``C``; complete when chains of nonidentity arrows are bounded."""
    longest = _longest_chain(C)
    complete = longest is not None
    top = longest if complete else trunc_dim
    data = {x: (0, ()) for x in C.objects}
    level = [(f,) for f in C.nonidentity()]
    n = 1
    while level and n <= top:
        for ch in level:
            faces = []
            for i in range(n + 1):
                face = chain_face(C, ch, i)
                if n == 1:
                    obj = C.tgt(ch[0]) if i == 0 else C.src(ch[0])
                    faces.append((obj, (0,)))
                else:
                    faces.append(chain_normal_form(C, face, C.src(face[0])))
            data[ch] = (n, tuple(faces))
        n += 1
        nxt = []
        for ch in level:
            for g in C.nonidentity():
                if C.src(g) == C.tgt(ch[-1]):
                    nxt.append(ch + (g,))
        level = nxt
    return SimplicialSet(
        data, top if complete else trunc_dim, complete=complete, name=name or C.name, cosk=2, validate=False
    )


def nerve_simplex(C: FiniteCategory, chain, start=None):
    """Normal form in ``nerve(C)`` of a chain of morphisms (identities allowed)."""
    chain = tuple(chain)
    if start is None:
        start = C.src(chain[0])
    return chain_normal_form(C, chain, start)
