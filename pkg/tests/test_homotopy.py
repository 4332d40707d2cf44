"""Homology, path components, Kan and trivial-fibration checks, and equivalence verdicts."""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from stratsimp.homotopy import (
    Group,
    homology,
    is_kan,
    pi0,
    smith_invariants,
    strata_links_equiv,
    trivial_fibration_check,
    weak_equiv_verdict,
)
from stratsimp.poset import chain, point
from stratsimp.simplicial import (
    FiniteCategory,
    SimplicialMap,
    SimplicialSet,
    empty_set,
    ex,
    identity_map,
    inclusion,
    make_generator,
    nerve,
    simplex,
)
from stratsimp.stratified import StratMap, make_strat, strat_from_category, strat_simplex


def sympy_invariants(rows):
    """Nonzero diagonal of the Smith normal form computed by sympy."""
    if not rows or not rows[0]:
        return []
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    return sorted(d for d in diag if d)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda r: st.lists(st.lists(st.integers(-6, 6), min_size=r, max_size=r), min_size=1, max_size=5)))
def test_smith_matches_sympy(rows):
    assert sorted(smith_invariants(rows)) == sympy_invariants(rows)


def test_smith_divisibility_chain():
    inv = smith_invariants([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert inv == sympy_invariants([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_homology_examples():
    for n in (0, 1, 2, 3):
        H = homology(simplex(n), n)
        assert H[0] == Group(1) and all(h == Group(0) for h in H[1:])
    circle = make_generator("boundary", 2)
    assert homology(circle, 1) == [Group(1), Group(1)]
    E, _ = ex(circle, 1, max_dim=2)
    assert [str(g) for g in homology(E, 1)] == ["Z", "Z"]


def test_homology_sphere_and_projective_plane():
    S2 = make_generator("boundary", 3)
    assert [str(g) for g in homology(S2, 2)] == ["Z", "0", "Z"]
    # Nerve of Z/2 through dimension 3 sees H_1 = Z/2.
    Z2 = FiniteCategory.from_presentation(["*"], {"g": ("*", "*")}, relations=[(("g", "g"), ())])
    H = homology(nerve(Z2, 3), 2)
    assert str(H[1]) == "Z/2"


def test_pi0():
    assert pi0(empty_set()) == 0
    assert pi0(make_generator("boundary", 1)) == 2
    assert pi0(make_generator("horn", 2, 0)) == 1


def test_is_kan():
    Z3 = FiniteCategory.from_presentation(["*"], {"g": ("*", "*")}, relations=[(("g",) * 3, ())])
    assert is_kan(nerve(Z3, 4), 3).equivalent
    v = is_kan(simplex(1), 2)
    assert v.refuted and v.replay()
    assert is_kan(simplex(0), 3).equivalent


def test_trivial_fibrations():
    X = make_generator("horn", 2, 0)
    assert trivial_fibration_check(identity_map(X), 2).equivalent
    two = make_generator("boundary", 1)
    pt = simplex(0)
    to_pt = SimplicialMap(two, pt, {v: pt.nf((0,)) for v in two.nondeg()})
    v = trivial_fibration_check(to_pt, 2)
    assert v.refuted and v.details["n"] == 1 and v.replay()


def test_edge_to_point_fails_at_dimension_one():
    D1, pt = simplex(1), simplex(0)
    f = SimplicialMap(D1, pt, {s: pt.nf((0,)) if len(s) == 1 else ((0,), (0, 0)) for s in D1.nondeg()})
    v = trivial_fibration_check(f, 3)
    assert v.refuted
    assert v.details["n"] == 1
    assert v.details["boundary"] == "(0)->(1);(1)->(0)"
    assert v.replay()


def test_weak_equiv_examples():
    X = make_generator("horn", 2, 0)
    assert weak_equiv_verdict(identity_map(X)).kind == "iso"
    circle = make_generator("boundary", 2)
    v = weak_equiv_verdict(inclusion(circle, simplex(2)))
    assert v.refuted and v.kind == "homology" and v.details["left"] == "Z" and v.details["right"] == "0"
    assert v.replay()
    w = weak_equiv_verdict(inclusion(make_generator("horn", 2, 1), simplex(2)))
    assert w.equivalent and w.kind == "anodyne" and w.replay()


def test_weak_equiv_pi0():
    two = make_generator("boundary", 1)
    v = weak_equiv_verdict(inclusion(two, simplex(1)))
    assert v.refuted and v.kind == "pi0" and (v.details["left"], v.details["right"]) == (2, 1)


def test_weak_equiv_deformation_retract():
    D1 = simplex(1)
    pt = SimplicialSet({(0,): (0, ())}, 0, complete=True)
    f = SimplicialMap(pt, D1, {(0,): D1.nf((0,))})
    v = weak_equiv_verdict(f)
    assert v.equivalent and v.replay()


# -- strata and links -----------------------------------------------------------------------

def identity_strat(X):
    T = X.total
    return StratMap(X, X, identity_map(T))


def test_strata_links_identity():
    P = chain(1)
    for labels in [("0", "0", "1"), ("0", "1", "1"), ("0", "1")]:
        X = strat_simplex(P, labels)
        v = strata_links_equiv(identity_strat(X))
        assert v.equivalent and v.replay()
    H = make_strat(make_generator("horn", 2, 0), P, {(0,): "0", (1,): "0", (2,): "1"})
    assert strata_links_equiv(identity_strat(H)).equivalent


def test_strata_collapse_is_refuted():
    P = point()
    circle = make_generator("boundary", 2)
    X = make_strat(circle, P, {v: "*" for v in circle.nondeg(0)})
    pt = simplex(0)
    Y = make_strat(pt, P, {(0,): "*"})
    asg = {s: pt.nf((0,)) if circle.dim_of(s) == 0 else ((0,), (0, 0)) for s in circle.nondeg()}
    f = StratMap(X, Y, SimplicialMap(circle, pt, asg))
    v = strata_links_equiv(f)
    assert v.refuted
    name, comp = v.components[0]
    assert name == "stratum *" and comp.kind == "homology" and comp.details["degree"] == 1
    assert v.replay()


def test_link_killing_is_refuted():
    P = chain(1)
    two = SimplicialSet(
        {"a": (0, ()), "b": (0, ()), "e": (1, (("b", (0,)), ("a", (0,)))), "f": (1, (("b", (0,)), ("a", (0,))))},
        1, complete=True,
    )
    X = make_strat(two, P, {"a": "0", "b": "1"})
    Y = strat_simplex(P, ("0", "1"))
    U = Y.total
    f = StratMap(X, Y, SimplicialMap(two, U, {"a": U.nf((0,)), "b": U.nf((1,)), "e": U.nf((0, 1)), "f": U.nf((0, 1))}))
    v = strata_links_equiv(f)
    comps = dict(v.components)
    assert comps["stratum 0"].equivalent and comps["stratum 1"].equivalent
    link = comps["link 0<1"]
    assert link.refuted and link.kind == "pi0" and (link.details["left"], link.details["right"]) == (2, 1)
    assert v.refuted and v.replay()


def test_strata_links_category_identity():
    C = FiniteCategory.from_presentation(["x", "y"], {"u": ("x", "y")}, invertible=["u"], name="E")
    X = strat_from_category(C, chain(1), {"x": "0", "y": "0"}, trunc_dim=3)
    assert strata_links_equiv(identity_strat(X)).equivalent


@pytest.mark.parametrize("n", [1, 2])
def test_homology_invariant_under_ex(n):
    X = make_generator("horn", 2, 0) if n == 1 else make_generator("boundary", 2)
    E, _ = ex(X, 1, max_dim=2)
    assert homology(E, 1) == homology(X, 1)
