"""Cell certificates for horn-generated classes and witnesses against outer horns."""

from __future__ import annotations

from dataclasses import dataclass, field

from ._util import Budget, Undetermined, canon_key, csorted, ident
from .homotopy import horn
from .poset import Poset, point
from .simplicial import (
    FiniteCategory,
    SimplicialMap,
    SimplicialSet,
    make_generator,
    pushout,
    simplex,
)
from .simplicial.category import nerve_simplex
from .simplicial.ops import identity, is_identity
from .simplicial.search import MapSearch, has_lift, iso_check
from .stratified import (
    NOT_TRIVIAL,
    StratSSet,
    classify_horn,
    in_kind,
    is_fibrant,
    strat_from_category,
    strat_simplex,
    strat_subcomplex,
    tensor,
)

ANY_HORN = "kan"


@dataclass
class Step:
    n: int
    k: int
    labels: tuple
    attach: dict  # horn simplex (vertex tuple) -> normal form in the current object


def step_names(idx: int) -> tuple:
    return (f"c{idx}.face", f"c{idx}.top")


def attach_horn(cur: StratSSet, step: Step, idx: int) -> StratSSet:
    """Pushout of ``Λ^n_k -> Δ^n`` along the step's attaching map.

    The pushout of a horn inclusion adds exactly two nondegenerate simplices:
    the missing face and the top simplex, named ``c<idx>.face`` / ``c<idx>.top``.
    """
    n, k, labels = step.n, step.k, tuple(step.labels)
    if len(labels) != n + 1:
        raise ValueError(f"step {idx}: expected {n + 1} labels")
    if not cur.base.is_monotone_tuple(labels):
        raise ValueError(f"step {idx}: labels {labels} are not monotone")
    T = cur.total
    if not T.complete and T.trunc_dim < n:
        raise ValueError(f"step {idx}: cannot attach a {n}-simplex above the truncation")
    H = horn(n, k)
    asg = {}
    for s in H.nondeg():
        if s not in step.attach:
            raise ValueError(f"step {idx}: attaching map misses {ident(s)}")
        nf = step.attach[s]
        if nf[0] not in T:
            raise ValueError(f"step {idx}: attaching map hits unknown simplex {ident(nf[0])}")
        asg[s] = nf
    h = SimplicialMap(H, T, asg, validate=False)
    try:
        h.validate()
    except (ValueError, KeyError) as exc:
        raise ValueError(f"step {idx}: attaching map is not simplicial ({exc})") from None
    for v in range(n + 1):
        if (v,) not in asg:
            continue
        got = cur.labels[asg[(v,)][0]]
        if got != labels[v]:
            raise ValueError(f"step {idx}: vertex {v} lands on label {got}, expected {labels[v]}")
    face_name, top_name = step_names(idx)
    if face_name in T or top_name in T:
        raise ValueError(f"step {idx}: names {face_name}/{top_name} already in use")
    full = tuple(range(n + 1))
    missing = full[:k] + full[k + 1:]
    data = T.data()
    new_labels = dict(cur.labels)
    if n == 1:
        data[face_name] = (0, ())
        new_labels[face_name] = labels[missing[0]]
    else:
        data[face_name] = (n - 1, tuple(h(H.nf(missing[:i] + missing[i + 1:])) for i in range(n)))
    faces = []
    for i in range(n + 1):
        if i == k:
            faces.append((face_name, identity(n - 1)))
        else:
            faces.append(h(H.nf(full[:i] + full[i + 1:])))
    data[top_name] = (n, tuple(faces))
    trunc = max(T.dim, n) if T.complete else T.trunc_dim
    out = SimplicialSet(data, trunc, complete=T.complete, name=cur.name, validate=False)
    return StratSSet(out, cur.base, new_labels, name=cur.name)


@dataclass
class CellCertificate:
    start: StratSSet
    steps: list
    claimed_end: StratSSet
    kind: str = "LH_P"
    hint: dict | None = None  # replayed simplex -> simplex of claimed_end
    saturated: bool = True
    meta: dict = field(default_factory=dict)

    def replay(self) -> StratSSet:
        cur = self.start
        for idx, step in enumerate(self.steps):
            cur = attach_horn(cur, step, idx)
        return cur

    def verify(self):
        return verify_certificate(self)

    def summary(self) -> str:
        return " ".join(f"({s.n},{s.k})" for s in self.steps) or "empty"


def _step_allowed(kind: str, labels, n: int, k: int) -> bool:
    if kind == ANY_HORN:
        return True
    return in_kind(kind, labels, n, k)


def verify_certificate(c: CellCertificate):
    """``(ok, diagnostics)``; replays every pushout and compares the result with ``claimed_end``."""
    cur = c.start
    for idx, step in enumerate(c.steps):
        if not _step_allowed(c.kind, step.labels, step.n, step.k):
            return False, f"step {idx}: horn ({step.n},{step.k}) with labels {step.labels} is not in {c.kind}"
        try:
            cur = attach_horn(cur, step, idx)
        except ValueError as exc:
            return False, str(exc)
    end = c.claimed_end
    hint = None
    if c.hint is not None:
        hint = {s: c.hint[s] for s in cur.total.nondeg() if s in c.hint}
    f = iso_check(cur.total, end.total, hint=hint, labels=(cur.labels, end.labels))
    if f is None:
        return False, "replayed object is not isomorphic to the claimed end over the poset"
    return True, f"{len(c.steps)} steps replayed"


# -- filling-order search -------------------------------------------------------------------

class _Builder:
    """Grows a closed set of simplices of ``target`` by horn attachments."""

    def __init__(self, target: StratSSet, start_sids, budget: Budget):
        self.target = target
        T = target.total
        self.present = set(T.closure(start_sids))
        self.rename = {s: s for s in self.present}
        self.steps = []
        self.budget = budget

    def candidates(self, within, kind):
        T = self.target.total
        present = self.present
        out = []
        for s in within:
            if s in present:
                continue
            n = T.dim_of(s)
            if n == 0:
                continue
            faces = T.faces(s)
            for k in range(n + 1):
                fs, feta = faces[k]
                if not is_identity(feta) or fs in present or fs not in within:
                    continue
                if any(faces[i][0] not in present for i in range(n + 1) if i != k):
                    continue
                labels = self.target.label_of(T.nf(s))
                if not _step_allowed(kind, labels, n, k):
                    continue
                out.append((n, canon_key(s), k, s, fs, labels))
        out.sort(key=lambda t: t[:3])
        return out

    def apply(self, s, fs, k, labels):
        T = self.target.total
        n = T.dim_of(s)
        idx = len(self.steps)
        H = horn(n, k)
        attach = {}
        snf = T.nf(s)
        for t in H.nondeg():
            sid, eta = T.apply(snf, t)
            attach[t] = (self.rename[sid], eta)
        self.steps.append(Step(n, k, tuple(labels), attach))
        face_name, top_name = step_names(idx)
        self.present.add(s)
        self.present.add(fs)
        self.rename[s] = top_name
        self.rename[fs] = face_name

    def undo(self, s, fs):
        self.steps.pop()
        self.present.discard(s)
        self.present.discard(fs)
        del self.rename[s]
        del self.rename[fs]

    def extend(self, within, kind) -> bool:
        """Depth-first search for a filling order reaching ``within``."""
        within = set(within)
        if not self.present <= within:
            within |= self.present
        failed = set()

        def rec():
            if within <= self.present:
                return True
            state = frozenset(self.present)
            if state in failed:
                return False
            for n, _, k, s, fs, labels in self.candidates(within, kind):
                self.budget.spend()
                self.apply(s, fs, k, labels)
                if rec():
                    return True
                self.undo(s, fs)
            failed.add(state)
            return False

        return rec()

    def certificate(self, start: StratSSet, kind: str) -> CellCertificate:
        T = self.target.total
        hint = {new: T.nf(old) for old, new in self.rename.items()}
        return CellCertificate(start, list(self.steps), self.target, kind=kind, hint=hint)


def search_certificate(target: StratSSet, start_sids, kind: str, budget=None, stages=None):
    """A certificate building ``target`` from the closure of ``start_sids``, or ``None``.

    ``stages`` optionally lists ``(within_sids, kind)`` intermediate goals.
    """
    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 10**6, "filling orders")
    b = _Builder(target, start_sids, budget)
    start = strat_subcomplex(target, b.present, name=f"{target.name}_start")
    for within, k in list(stages or []) + [(set(target.total.nondeg()), kind)]:
        if not b.extend(within, k):
            return None
    used = kind if not stages else _widest([kind] + [k for _, k in stages])
    return b.certificate(start, used)


def _widest(kinds):
    for k in (ANY_HORN, "J_P", "LH_P", "IH_P"):
        if k in kinds:
            return k
    return kinds[0]


def search_relative_certificate(Y: SimplicialSet, image, kinds=ANY_HORN, budget=None):
    """Horn-attachment presentation of ``Y`` from a closed subset (unstratified)."""
    P = point()
    lab = {v: "*" for v in Y.nondeg(0)}
    target = StratSSet(Y, P, lab, name=Y.name)
    return search_certificate(target, image, kinds, budget)


# -- the named decompositions ---------------------------------------------------------------

def _point_poset():
    return point()


def spine_certificate(n: int, budget=None) -> CellCertificate:
    """``Spn^n -> Δ^n`` over the point by inner horns."""
    if n < 1:
        raise ValueError("n must be at least 1")
    P = _point_poset()
    target = strat_simplex(P, ("*",) * (n + 1), name=f"D{n}")
    start = [(i, i + 1) for i in range(n)]
    cert = search_certificate(target, start, "IH_P", budget)
    if cert is None:
        raise AssertionError(f"no inner filling order found for the spine of D{n}")
    return cert


def prism_certificate(m: int, labels, P: Poset | None = None, budget=None) -> CellCertificate:
    """``(∂Δ^m ⋊ Δ¹) ∪ (Δ^m ⋊ Δ^{0}) -> Δ^m ⋊ Δ¹`` by left horns."""
    labels = tuple(labels)
    if len(labels) != m + 1:
        raise ValueError(f"need {m + 1} labels")
    P = P or _default_poset(labels)
    D = strat_simplex(P, labels)
    target = tensor(D, simplex(1), name=f"D{m}xD1")
    full = tuple(range(m + 1))
    start = [s for s in target.total.nondeg() if s[0][0] != full or s[1][0] == (0,)]
    cert = search_certificate(target, start, "LH_P", budget)
    if cert is None:
        raise AssertionError(f"no left-horn filling order found for the prism over D{m}")
    return cert


def _default_poset(labels):
    elems = csorted(set(labels))
    return Poset(elems, list(zip(elems, elems[1:])), name="labels")


def _spine_part(t, j) -> bool:
    """``t`` (a vertex tuple of ``Δ^n``) lies in ``Spn^j``."""
    if len(t) == 1:
        return t[0] <= j
    return len(t) == 2 and t[1] == t[0] + 1 and t[1] <= j


def cone_certificate(X: StratSSet, n: int, budget=None) -> CellCertificate:
    """``X ⋊ Δ^{0} -> X ⋊ Δ^n``: left-horn stages along the spine, then inner horns."""
    if n < 1:
        raise ValueError("n must be at least 1")
    target = tensor(X, simplex(n), name=f"{X.name}xD{n}")
    T = target.total
    start = [s for s in T.nondeg() if s[1][0] == (0,)]
    stages = []
    for j in range(1, n + 1):
        within = {s for s in T.nondeg() if _spine_part(s[1][0], j)}
        stages.append((within, "LH_P"))
    cert = search_certificate(target, start, "IH_P", budget, stages=stages)
    if cert is None:
        raise AssertionError(f"no filling order found for the cone over {X.name}")
    cert.kind = "LH_P"
    return cert


# -- the base case of the left-horn induction ------------------------------------------------

def base_case_witness(P: Poset, labels, trunc_dim: int = 3) -> dict:
    """Check the two pushout squares and the inclusions ``Λ²₀ -> L²₀ -> D²₀``."""
    labels = tuple(labels)
    if trunc_dim < 2:
        raise ValueError("truncation must be at least 2")
    if len(labels) != 3 or labels[0] != labels[1] or not P.is_monotone_tuple(labels):
        raise ValueError("labels must be a monotone triple with equal first two entries")
    # E: the walking isomorphism 0 ≅ 1.
    E = FiniteCategory.from_preorder(["0", "1"], [("0", "1"), ("1", "0")], name="E")
    D = FiniteCategory.from_preorder(["0", "1", "2"], [("0", "1"), ("1", "0"), ("1", "2")], name="D20")
    lab = {str(i): labels[i] for i in range(3)}
    NE = strat_from_category(E, P, {"0": lab["0"], "1": lab["1"]}, trunc_dim, name="E")
    ND = strat_from_category(D, P, lab, trunc_dim, name="D20")
    pt = simplex(0)
    d02 = make_generator("simplex", 1)  # Δ^{0,2}: vertices (0,), (1,) stand for 0 and 2
    d01 = make_generator("simplex", 1)
    # back face: Λ²₀ = Δ^{01} ⊔_{Δ^0} Δ^{02}
    to01 = SimplicialMap(pt, d01, {(0,): ((0,), (0,))})
    to02 = SimplicialMap(pt, d02, {(0,): ((0,), (0,))})
    back, back_cocone = pushout(to01, to02, name="back")
    L20 = make_generator("horn", 2, 0)
    back_iso = iso_check(back, L20)
    # front face: L²₀ = E ⊔_{Δ^0} Δ^{02}
    toE = SimplicialMap(pt, NE.total, {(0,): ("0", (0,))})
    front, front_cocone = pushout(toE, to02, name="L20")
    # Λ²₀ -> L²₀ induced by Δ^{01} -> E on the back face
    e01 = nerve_simplex(E, (("0", "1"),))
    d01_to_E = SimplicialMap(d01, NE.total, {(0,): ("0", (0,)), (1,): ("1", (0,)), (0, 1): e01})
    ok_d01 = _valid(d01_to_E)
    horn_to_L = {}
    for s in back.nondeg():
        key, sid = _origin(back_cocone, s)
        if key == "B":
            horn_to_L[s] = front_cocone["B"](d01_to_E(d01.nf(sid)))
        elif key == "C":
            horn_to_L[s] = front_cocone["C"](d02.nf(sid))
    m1 = SimplicialMap(back, front, horn_to_L, validate=False)
    ok_m1 = _valid(m1) and m1.is_injective()
    # L²₀ -> D²₀: E -> D on {0, 1} and Δ^{02} -> D as 0 -> 2
    E_to_D = {}
    for s in NE.total.nondeg():
        if isinstance(s, str):
            E_to_D[s] = (s, (0,))
        else:
            E_to_D[s] = nerve_simplex(D, s)
    E_to_D = SimplicialMap(NE.total, ND.total, E_to_D, validate=False)
    d02_to_D = SimplicialMap(
        d02, ND.total, {(0,): ("0", (0,)), (1,): ("2", (0,)), (0, 1): nerve_simplex(D, (("0", "2"),))},
        validate=False,
    )
    L_to_D = {}
    for s in front.nondeg():
        key, sid = _origin(front_cocone, s)
        src = NE.total if key == "B" else d02
        L_to_D[s] = (E_to_D if key == "B" else d02_to_D)(src.nf(sid))
    m2 = SimplicialMap(front, ND.total, L_to_D, validate=False)
    ok_m2 = _valid(m2) and m2.is_injective()
    # Δ² inside D²₀ through 0 -> 1 -> 2
    D2 = simplex(2)
    d2_to_D = {}
    for t in D2.nondeg():
        objs = [str(i) for i in t]
        if len(objs) == 1:
            d2_to_D[t] = (objs[0], (0,))
        else:
            d2_to_D[t] = nerve_simplex(D, tuple(zip(objs, objs[1:])))
    m3 = SimplicialMap(D2, ND.total, d2_to_D, validate=False)
    ok_m3 = _valid(m3) and m3.is_injective()
    labels_ok = all(
        ND.labels[m2.assignment[v][0]] == labels[int(_vertex_name(front_cocone, v))]
        for v in front.nondeg(0)
    )
    return {
        "back_face_is_horn": back_iso is not None,
        "L20_vertices": len(front.nondeg(0)),
        "horn_to_L20": ok_m1 and ok_d01,
        "L20_to_D20": ok_m2,
        "simplex_in_D20": ok_m3,
        "labels_compatible": labels_ok,
        "E_counts": NE.total.counts(),
        "D20_counts": ND.total.counts(),
        "trunc_dim": trunc_dim,
    }


def _valid(f: SimplicialMap) -> bool:
    try:
        f.validate()
        return True
    except (ValueError, KeyError):
        return False


def _origin(cocone, s):
    for key in ("B", "C", "A"):
        for sid, (img, eta) in cocone[key].assignment.items():
            if img == s and is_identity(eta) and len(eta) - 1 == cocone[key].source.dim_of(sid):
                return key, sid
    raise KeyError(s)


def _vertex_name(cocone, v):
    key, sid = _origin(cocone, v)
    if key == "B":
        return sid if isinstance(sid, str) else str(sid[0])
    return "0" if sid == (0,) else "2"


# -- witnesses against outer horns ------------------------------------------------------------

@dataclass
class NonLiftWitness:
    n: int
    k: int
    labels: tuple
    base: Poset
    target: StratSSet
    top: SimplicialMap
    record: dict
    fibrancy: object = None

    def recheck(self) -> bool:
        """Re-run the fibrancy test and the exhaustive lift search."""
        if not is_fibrant(self.target).equivalent:
            return False
        return _lift(self.n, self.k, self.labels, self.target, self.top, Budget(10**6)) is None


def _lift(n, k, labels, target: StratSSet, top: SimplicialMap, budget):
    H = horn(n, k)
    D = simplex(n)
    i = SimplicialMap(H, D, {s: D.nf(s) for s in H.nondeg()}, validate=False)
    N = target.structure.target
    bottom = SimplicialMap(
        D, N, {t: _chain_nf(tuple(labels[v] for v in t)) for t in D.nondeg()}, validate=False
    )
    return has_lift(i, target.structure, top, bottom, budget=budget)


def _chain_nf(seq):
    from .simplicial import chain_nf

    return chain_nf(seq)


def _thin_target(n, k, labels, P):
    """The horn itself as a stratified poset nerve (for n <= 2)."""
    full = tuple(range(n + 1))
    tops = [full[:i] + full[i + 1:] for i in range(n + 1) if i != k]
    objs = sorted({v for t in tops for v in t})
    rel = set()
    for t in tops:
        for a in t:
            for b in t:
                if a < b:
                    rel.add((str(a), str(b)))
    C = FiniteCategory.from_preorder([str(v) for v in objs], sorted(rel), name=f"L{n}_{k}")
    return C, strat_from_category(C, P, {str(v): labels[v] for v in objs}, trunc_dim=3, name=f"L{n}_{k}")


def _category_horn_map(C, n, k, edge):
    """``Λ^n_k -> N(C)`` from a choice of morphism for each edge ``(a, b)``."""
    H = horn(n, k)
    asg = {}
    for t in H.nondeg():
        if len(t) == 1:
            asg[t] = (str(t[0]), (0,))
        else:
            asg[t] = nerve_simplex(C, tuple(edge[(a, b)] for a, b in zip(t, t[1:])))
    return asg


def _twisted_candidates(labels, k):
    """Bounded family of categories for ``n = 3`` witnesses.

    Objects ``0..3`` with a generating chain ``e01, e12, e23`` and an extra
    arrow ``a`` parallel to the long edge opposite the horn vertex, made
    equal to the chain after precomposing (``k = 0``) or postcomposing
    (``k = 3``) with the outer edge.  Edges inside a stratum are inverted;
    the optional relations cut the resulting automorphism groups down to
    order two so that the category stays finite.
    """
    objs = ["0", "1", "2", "3"]
    gens = {"e01": ("0", "1"), "e12": ("1", "2"), "e23": ("2", "3")}
    if k == 0:
        gens["a"] = ("1", "3")
        rel = [(("e01", "a"), ("e01", "e12", "e23"))]
        a_ends = (1, 3)
        loop = ("e12", "e23", "a^-1")
    else:
        gens["a"] = ("0", "2")
        rel = [(("a", "e23"), ("e01", "e12", "e23"))]
        a_ends = (0, 2)
        loop = ("e01", "e12", "a^-1")
    inv = [g for g, (s, t) in gens.items() if g != "a" and labels[int(s)] == labels[int(t)]]
    if labels[a_ends[0]] == labels[a_ends[1]]:
        inv.append("a")
    extra = [[]]
    if "a" in inv:
        extra.append([(loop + loop, ())])
    out = []
    for ex_rel in extra:
        try:
            C = FiniteCategory.from_presentation(objs, gens, rel + ex_rel, invertible=inv, name="C3", max_word_len=10)
        except ValueError:
            continue
        out.append(C)
    return out


def non_lifting_witness(n: int, k: int, labels, P: Poset, budget=None):
    """A fibrant target and a horn map that does not extend to ``Δ^n`` over ``P``.

    Returns a :class:`NonLiftWitness`, or ``None`` when the bounded search for
    ``n = 3`` finds nothing (never a fabricated witness).
    """
    labels = tuple(labels)
    if classify_horn(labels, n, k, P) != NOT_TRIVIAL:
        raise ValueError("horn is trivial; no witness exists")
    if budget is None or isinstance(budget, int):
        budget = Budget(budget or 10**6, "lift candidates")
    if n <= 2:
        C, target = _thin_target(n, k, labels, P)
        full = tuple(range(n + 1))
        edge = {(a, b): (str(a), str(b)) for a in full for b in full if a < b}
        candidates = [(C, target, _category_horn_map(C, n, k, edge))]
    elif n == 3:
        candidates = []
        for C in _twisted_candidates(labels, k):
            target = strat_from_category(C, P, {str(i): labels[i] for i in range(4)}, trunc_dim=3, name="C3")
            edge = {(0, 1): "e01", (1, 2): "e12", (2, 3): "e23"}
            if k == 0:
                edge.update({(0, 2): "e01.e12", (0, 3): "e01.e12.e23", (1, 3): "a"})
            else:
                edge.update({(0, 2): "a", (0, 3): "e01.e12.e23", (1, 3): "e12.e23"})
            if not all(e in C.morphisms for e in edge.values()):
                continue
            candidates.append((C, target, _category_horn_map(C, n, k, edge)))
    else:
        raise ValueError("witnesses are only searched for n <= 3")
    H = horn(n, k)
    for C, target, asg in candidates:
        top = SimplicialMap(H, target.total, asg, validate=False)
        if not _valid(top):
            continue
        fib = is_fibrant(target)
        if not fib.equivalent:
            continue
        before = budget.used
        try:
            lift = _lift(n, k, labels, target, top, budget)
        except Undetermined:
            return None
        if lift is not None:
            continue
        total_maps = sum(1 for _ in MapSearch(simplex(n), target.total, budget=Budget(10**6)))
        record = {
            "definitive": True,
            "lifts": 0,
            "maps_from_simplex": total_maps,
            "search_steps": budget.used - before,
            "target_objects": len(C.objects),
            "target_morphisms": len(C.morphisms),
        }
        return NonLiftWitness(n, k, labels, P, target, top, record, fib)
    return None
