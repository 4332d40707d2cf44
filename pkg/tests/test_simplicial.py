"""Normal forms, standard constructions, colimits, mapping spaces, Ex and search."""

import pytest
from hypothesis import given, settings, strategies as st

from stratsimp._util import TruncationError
from stratsimp.poset import all_posets, chain
from stratsimp.simplicial import (
    FiniteCategory,
    SimplicialMap,
    SimplicialSet,
    colimit,
    ex,
    fiber_product,
    has_lift,
    identity_map,
    inclusion,
    iso_check,
    make_generator,
    mapping_space,
    nerve,
    poset_nerve,
    product,
    pushout,
    simplex,
)
from stratsimp.simplicial.category import chain_normal_form
from stratsimp.simplicial.ops import chain_nf, codegeneracy, coface, compose, eta_of_word, monotone_maps, word_of


def walking_iso():
    return FiniteCategory.from_presentation(["0", "1"], {"f": ("0", "1")}, invertible=["f"], name="E")


def cyclic(n):
    return FiniteCategory.from_presentation(["*"], {"g": ("*", "*")}, relations=[(("g",) * n, ())], name=f"Z{n}")


# -- generators ------------------------------------------------------------------

def test_generators():
    assert make_generator("spine", 2).data() == make_generator("horn", 2, 1).data()
    b1 = make_generator("boundary", 1)
    assert b1.counts() == (2,)
    h = make_generator("horn", 2, 0)
    assert h.nondeg(0) == ((0,), (1,), (2,))
    assert set(h.nondeg(1)) == {(0, 1), (0, 2)}
    with pytest.raises(ValueError):
        make_generator("horn", 2, 3)
    assert make_generator("simplex", 3).counts() == (4, 6, 4, 1)


def test_validation_catches_bad_faces():
    bad = {
        "a": (0, ()),
        "b": (0, ()),
        "e": (1, (("a", (0,)), ("b", (0,)))),
        "f": (1, (("b", (0,)), ("b", (0,)))),
        "t": (2, (("e", (0, 1)), ("e", (0, 1)), ("e", (0, 1)))),
    }
    with pytest.raises(ValueError):
        SimplicialSet(bad, 2)


def test_word_roundtrip():
    for n in range(5):
        for d in range(n + 1):
            from stratsimp.simplicial.ops import surjections

            for eta in surjections(n, d):
                assert eta_of_word(word_of(eta), d) == eta


# -- normal-form confluence against direct composition ---------------------------

ops_strategy = st.lists(st.tuples(st.sampled_from("ds"), st.integers(0, 6)), max_size=6)


def _apply_ops(start_dim, ops):
    """Compose the operator word as a monotone map into [start_dim]."""
    theta = tuple(range(start_dim + 1))
    n = start_dim
    applied = []
    for kind, i in ops:
        if kind == "d":
            if n == 0:
                continue
            i %= n + 1
            theta = compose(theta, coface(n, i))
            n -= 1
        else:
            i %= n + 1
            theta = compose(theta, codegeneracy(n, i))
            n += 1
        applied.append((kind, i))
    return theta, applied


@settings(max_examples=200, deadline=None)
@given(ops_strategy)
def test_normal_form_confluence_in_simplex(ops):
    X = simplex(3)
    theta, applied = _apply_ops(3, ops)
    nf = X.nf((0, 1, 2, 3))
    for kind, i in applied:
        nf = X.face(nf, i) if kind == "d" else X.degen(nf, i)
    # Oracle: a simplex of Δ^3 is its vertex sequence.
    assert nf == chain_nf(theta)
    assert X.apply(X.nf((0, 1, 2, 3)), theta) == nf


def _chain_op(C, chain, theta, start):
    """Oracle for operators on nerve chains: compose the arrows in each block."""
    objs = [start]
    for f in chain:
        objs.append(C.tgt(f))
    out = []
    for k in range(1, len(theta)):
        g = C.ids[objs[theta[k - 1]]]
        for j in range(theta[k - 1], theta[k]):
            g = C.then(g, chain[j])
        out.append(g)
    return tuple(out), objs[theta[0]]


@settings(max_examples=150, deadline=None)
@given(ops_strategy, st.sampled_from([0, 1]))
def test_normal_form_confluence_in_nerve(ops, which):
    E = walking_iso()
    N = nerve(E, 5)
    top = N.nondeg(3)[which]
    theta, applied = _apply_ops(3, ops)
    if len(theta) - 1 > 5:
        return
    nf = N.nf(top)
    for kind, i in applied:
        nf = N.face(nf, i) if kind == "d" else N.degen(nf, i)
    start = E.src(top[0])
    chain, s = _chain_op(E, top, theta, start)
    assert nf == chain_normal_form(E, chain, s)


# -- categories and nerves -------------------------------------------------------

def test_walking_iso_presentation():
    E = walking_iso()
    assert len(E.morphisms) == 4
    assert E.is_iso("f")
    N = nerve(E, 3)
    assert not N.complete
    # two alternating words per dimension, starting at either object
    assert N.counts() == (2, 2, 2, 2)
    N.validate()


def test_cyclic_group_presentation():
    Z3 = cyclic(3)
    assert len(Z3.morphisms) == 3
    assert all(Z3.is_iso(g) for g in Z3.morphisms)
    N = nerve(Z3, 3)
    assert N.counts() == (1, 2, 4, 8)


def test_infinite_presentation_rejected():
    with pytest.raises(ValueError):
        FiniteCategory.from_presentation(["*"], {"g": ("*", "*")}, max_word_len=6)


def test_nerve_of_poset_category_matches_poset_nerve():
    for P in all_posets(3):
        C = FiniteCategory.from_poset(P)
        N = nerve(C, 3)
        assert N.complete
        assert iso_check(N, poset_nerve(P)) is not None


def test_nerve_examples():
    N = nerve(FiniteCategory.from_poset(chain(2)), 3)
    assert N.counts() == (3, 3, 1)
    disc = nerve(FiniteCategory.from_preorder(["a", "b"], []), 2)
    assert disc.counts() == (2,)


# -- products ------------------------------------------------------------------------

def _product_oracle(p, q, n):
    """Count injective monotone maps [n] -> [p] x [q] hitting every coordinate value."""
    count = 0
    for a in monotone_maps(n, p):
        if set(a) != set(range(p + 1)):
            continue
        for b in monotone_maps(n, q):
            if set(b) != set(range(q + 1)):
                continue
            if len(set(zip(a, b))) == n + 1:
                count += 1
    return count


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_product_counts_against_oracle(p, q):
    XY = product(simplex(p), simplex(q))
    XY.validate()
    for n in range(p + q + 1):
        # nondegenerate n-simplices of Δ^p × Δ^q are injective paths; sum over faces
        total = 0
        for fp in range(p + 1):
            for fq in range(q + 1):
                from math import comb

                total += comb(p + 1, fp + 1) * comb(q + 1, fq + 1) * _product_oracle(fp, fq, n)
        assert len(XY.nondeg(n)) == total


def test_product_examples():
    assert product(simplex(1), simplex(1)).counts() == (4, 5, 2)
    X = make_generator("horn", 3, 1)
    assert iso_check(product(X, simplex(0)), X) is not None
    Z = product(make_generator("boundary", 1), simplex(1))
    assert Z.counts() == (4, 2)


def test_product_associative():
    A, B, C = simplex(1), make_generator("horn", 2, 0), make_generator("boundary", 1)
    left = product(product(A, B), C)
    right = product(A, product(B, C))
    assert iso_check(left, right) is not None


def test_product_truncation():
    N = nerve(walking_iso(), 3)
    XY = product(N, simplex(2))
    assert not XY.complete and XY.trunc_dim == 3


# -- colimits ------------------------------------------------------------------------------

def test_pushout_of_points():
    pt = simplex(0)
    f = identity_map(pt)
    P, cocone = pushout(f, f)
    assert P.counts() == (1,)


def test_pushout_gives_horn():
    D = simplex(2)
    e01 = D.subobject([(0, 1)])
    e02 = D.subobject([(0, 2)])
    v0 = D.subobject([(0,)])
    P, cocone = pushout(inclusion(v0, e01), inclusion(v0, e02))
    assert iso_check(P, make_generator("horn", 2, 0)) is not None
    for key in cocone:
        cocone[key].validate()


@pytest.mark.parametrize("P", all_posets(3), ids=lambda P: P.name)
def test_colimit_of_strings_is_nerve(P):
    objects, maps = {}, []
    for s in P.strings():
        objects[s] = poset_nerve(P.sub(s))
    for s in P.strings():
        for t in P.strings():
            if s != t and set(s) <= set(t):
                maps.append((s, t, inclusion(objects[s], objects[t])))
    colim, cocone = colimit(objects, maps)
    assert iso_check(colim, poset_nerve(P)) is not None
    image = set()
    for key, f in cocone.items():
        f.validate()
        image |= f.image()
    assert image == set(colim.nondeg())


def test_colimit_collapse_to_point():
    # Coequalizer of the two endpoints of an edge, then collapse the loop by a map to Δ⁰.
    D1 = simplex(1)
    pt = simplex(0)
    crush = SimplicialMap(D1, pt, {s: ((0,), tuple(0 for _ in s)) for s in D1.nondeg()})
    colim, cocone = colimit({"a": D1, "b": pt}, [("a", "b", crush)])
    assert colim.counts() == (1,)


def test_colimit_degenerate_identification():
    # Glue the edge of Δ¹ to a degenerate edge of a point: result is a point.
    D1 = simplex(1)
    pt = simplex(0)
    glue = SimplicialMap(D1, pt, {(0,): ((0,), (0,)), (1,): ((0,), (0,)), (0, 1): ((0,), (0, 0))})
    A = simplex(2).subobject([(0, 1)])
    colim, _ = colimit({"x": D1, "p": pt, "y": A}, [("x", "p", glue), ("x", "y", identity_map(D1).then(identity_map(D1)))])
    assert colim.counts() == (1,)


# -- fiber products -------------------------------------------------------------------

def test_fiber_product_over_point_is_product():
    A, B = simplex(1), make_generator("horn", 2, 0)
    pt = simplex(0)
    fa = SimplicialMap(A, pt, {s: ((0,), tuple(0 for _ in s)) for s in A.nondeg()})
    fb = SimplicialMap(B, pt, {s: ((0,), tuple(0 for _ in s)) for s in B.nondeg()})
    assert iso_check(fiber_product(fa, fb), product(A, B)) is not None


# -- mapping spaces ---------------------------------------------------------------------

def test_mapping_space_examples():
    X = make_generator("horn", 2, 0)
    assert iso_check(mapping_space(simplex(0), X, 2), X) is not None
    M = mapping_space(simplex(1), simplex(0), 2)
    assert M.counts() == (1,)
    assert mapping_space(make_generator("boundary", 1), simplex(1), 0).counts() == (4,)


def test_mapping_space_edge_count():
    # Maps ∂Δ¹ × Δ¹ -> Δ¹ are pairs of maps Δ¹ -> Δ¹ (3 each); 4 of the 9 are degenerate.
    M = mapping_space(make_generator("boundary", 1), simplex(1), 1)
    assert M.counts() == (4, 5)
    M.validate()


def test_mapping_space_of_nerve_is_nerve_up_to_iso():
    N = nerve(walking_iso(), 3)
    M = mapping_space(simplex(0), N, 3)
    assert iso_check(M, N) is not None
    assert M.cosk == 2


# -- Ex ----------------------------------------------------------------------------------

def test_ex_of_point():
    for m in range(3):
        E, inc = ex(simplex(0), m, max_dim=2)
        assert E.counts() == (1,)


def test_ex_boundary_counts():
    E, inc = ex(make_generator("boundary", 2), 1, max_dim=1)
    assert E.counts() == (3, 11)
    inc.validate()


def test_ex_inclusion_injective():
    E, inc = ex(simplex(1), 1, max_dim=1)
    inc.validate()
    assert inc.is_injective()


# -- lifting and isomorphism -----------------------------------------------------------

def _const_map(X, Y, v):
    return SimplicialMap(X, Y, {s: (v, tuple(0 for _ in range(X.dim_of(s) + 1))) for s in X.nondeg()})


def test_has_lift_identity():
    X = make_generator("horn", 2, 0)
    i = identity_map(X)
    p = identity_map(X)
    assert has_lift(i, p, identity_map(X), identity_map(X)) is not None


@pytest.mark.parametrize("C", [walking_iso(), cyclic(2), FiniteCategory.from_poset(chain(2))], ids=lambda C: C.name)
def test_inner_horn_lifts_into_nerves(C):
    N = nerve(C, 3)
    pt = simplex(0)
    p = _const_map(N, pt, (0,))
    H, D = make_generator("horn", 2, 1), simplex(2)
    i = inclusion(H, D)
    from stratsimp.simplicial import enumerate_maps

    for top in enumerate_maps(H, N):
        assert has_lift(i, p, top, _const_map(D, pt, (0,))) is not None


def test_outer_horn_over_poset_has_no_lift():
    P = chain(2)
    NP = poset_nerve(P)
    H, D = make_generator("horn", 2, 0), simplex(2)
    labels = {0: "0", 1: "1", 2: "2"}

    def over(X):
        return SimplicialMap(X, NP, {s: chain_nf(tuple(labels[v] for v in s)) for s in X.nondeg()})

    assert has_lift(inclusion(H, D), over(H), identity_map(H), over(D)) is None


def test_truncation_is_reported():
    N = nerve(walking_iso(), 1)
    with pytest.raises(TruncationError):
        from stratsimp.simplicial import enumerate_maps

        enumerate_maps(simplex(2), N)


def test_iso_examples():
    X = make_generator("horn", 3, 2)
    assert iso_check(X, X) is not None
    assert iso_check(simplex(1), make_generator("boundary", 1)) is None
    assert iso_check(make_generator("horn", 2, 1), make_generator("spine", 2)) is not None
    # edge orientations differ: a source vertex of degree 2 versus a path
    assert iso_check(make_generator("horn", 2, 0), make_generator("horn", 2, 1)) is None
    assert iso_check(make_generator("horn", 3, 0), make_generator("boundary", 2)) is None


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)), st.sets(st.sampled_from([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (0, 3), (1, 2)]), min_size=1))
def test_iso_of_relabelled_complexes(perm, tops):
    from stratsimp.simplicial import simplex_subcomplex

    X = simplex_subcomplex(3, tops)
    data = {}
    rename = lambda t: tuple("v%d" % perm[v] for v in t)
    for s in X.nondeg():
        d, faces = X.dim_of(s), X.faces(s)
        data[rename(s)] = (d, tuple((rename(f), e) for f, e in faces))
    Y = SimplicialSet(data, 3, complete=True)
    f = iso_check(X, Y)
    assert f is not None
    f.validate()
    assert f.is_iso()
