"""Cell certificates, the left-horn base case and witnesses against outer horns."""

import pytest

from stratsimp.anodyne import (
    CellCertificate,
    Step,
    base_case_witness,
    cone_certificate,
    non_lifting_witness,
    prism_certificate,
    spine_certificate,
    verify_certificate,
)
from stratsimp.poset import all_posets, chain, monotone_tuples, point
from stratsimp.simplicial import enumerate_maps, iso_check, make_generator, simplex
from stratsimp.stratified import (
    NOT_TRIVIAL,
    TRIVIAL_INNER,
    TRIVIAL_LEFT,
    classify_horn,
    make_strat,
    strat_simplex,
    tensor,
)


def lifts_by_brute_force(w):
    """Every map ``Δ^n -> target`` extending the horn map with the right labels."""
    D = simplex(w.n)
    out = []
    for f in enumerate_maps(D, w.target.total):
        if any(f(D.nf(s)) != w.top.assignment[s] for s in w.top.source.nondeg()):
            continue
        if tuple(w.target.labels[f.assignment[(v,)][0]] for v in range(w.n + 1)) != tuple(w.labels):
            continue
        out.append(f)
    return out


def step_classes(cert):
    P = cert.start.base
    return [classify_horn(s.labels, s.n, s.k, P) for s in cert.steps]


# -- verification ----------------------------------------------------------------------------

def test_empty_certificate():
    X = strat_simplex(point(), ("*", "*"))
    assert verify_certificate(CellCertificate(X, [], X))[0]


def test_spine_certificates():
    assert spine_certificate(1).steps == []
    c2 = spine_certificate(2)
    assert [(s.n, s.k) for s in c2.steps] == [(2, 1)]
    for n in (2, 3, 4):
        c = spine_certificate(n)
        assert c.verify()[0]
        assert set(step_classes(c)) == {TRIVIAL_INNER}


def test_corrupted_certificate_names_step():
    c = spine_certificate(3)
    bad = c.steps[1]
    att = dict(bad.attach)
    key = next(k for k in att if len(k) == 2)
    att[key] = att[(0,)] if key != (0,) else att[(1,)]
    broken = CellCertificate(c.start, [c.steps[0], Step(bad.n, bad.k, bad.labels, att)] + c.steps[2:], c.claimed_end)
    ok, diag = verify_certificate(broken)
    assert not ok
    assert diag.startswith("step 1")


def test_wrong_kind_is_rejected():
    c = spine_certificate(2)
    c2 = CellCertificate(c.start, c.steps, c.claimed_end, kind="E_P")
    ok, diag = verify_certificate(c2)
    assert not ok and "not in E_P" in diag


def test_wrong_end_is_rejected():
    c = spine_certificate(2)
    other = strat_simplex(point(), ("*", "*", "*", "*"))
    assert not verify_certificate(CellCertificate(c.start, c.steps, other))[0]


def test_replay_is_deterministic():
    c = spine_certificate(3)
    a, b = c.replay(), c.replay()
    assert a.total.data() == b.total.data()
    assert a.labels == b.labels


# -- prisms and cones --------------------------------------------------------------------

def test_prism_zero():
    c = prism_certificate(0, ("p",))
    assert [(s.n, s.k, tuple(s.labels)) for s in c.steps] == [(1, 0, ("p", "p"))]


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("kind", ["constant", "increasing"])
def test_prism_shapes(m, kind):
    labels = tuple("0" for _ in range(m + 1)) if kind == "constant" else tuple(str(i) for i in range(m + 1))
    c = prism_certificate(m, labels)
    assert len(c.steps) == m + 1
    assert all(s.n == m + 1 for s in c.steps)
    assert set(step_classes(c)) <= {TRIVIAL_INNER, TRIVIAL_LEFT}
    assert c.verify()[0]


def test_cone_of_point_matches_prism():
    P = chain(1)
    X = strat_simplex(P, ("0",))
    c = cone_certificate(X, 1)
    p = prism_certificate(0, ("0",), P)
    assert [(s.n, s.k, tuple(s.labels)) for s in c.steps] == [(s.n, s.k, tuple(s.labels)) for s in p.steps]


def test_cone_of_point_dimension_two():
    X = strat_simplex(point(), ("*",))
    c = cone_certificate(X, 2)
    assert c.verify()[0]
    # two left horns build the spine, then one inner horn fills the triangle
    assert [(s.n, s.k) for s in c.steps] == [(1, 0), (1, 0), (2, 1)]


def test_cone_of_two_points_splits():
    P = chain(1)
    X = make_strat(make_generator("boundary", 1), P, {(0,): "0", (1,): "1"})
    c = cone_certificate(X, 1)
    assert sorted(tuple(s.labels) for s in c.steps) == [("0", "0"), ("1", "1")]
    assert iso_check(c.claimed_end.total, tensor(X, simplex(1)).total) is not None


@pytest.mark.parametrize("n", [1, 2])
def test_cone_of_horn(n):
    P = chain(1)
    X = make_strat(make_generator("horn", 2, 0), P, {(0,): "0", (1,): "0", (2,): "1"})
    c = cone_certificate(X, n)
    assert c.verify()[0]
    assert set(step_classes(c)) <= {TRIVIAL_INNER, TRIVIAL_LEFT}


# -- base case ---------------------------------------------------------------------------

def test_base_case_witness():
    P = chain(1)
    w = base_case_witness(P, ("0", "0", "1"))
    assert w["back_face_is_horn"]
    assert w["L20_vertices"] == 3
    assert w["horn_to_L20"] and w["L20_to_D20"] and w["simplex_in_D20"] and w["labels_compatible"]
    with pytest.raises(ValueError):
        base_case_witness(P, ("0", "0", "1"), trunc_dim=1)
    with pytest.raises(ValueError):
        base_case_witness(P, ("0", "1", "1"))


def test_base_case_constant_labels():
    w = base_case_witness(point(), ("*", "*", "*"), trunc_dim=2)
    assert all(v for v in w.values() if isinstance(v, bool))


# -- witnesses against outer horns -----------------------------------------------------------

def test_non_lift_edge():
    w = non_lifting_witness(1, 0, ("0", "1"), chain(1))
    assert w is not None and w.record["definitive"] and w.record["lifts"] == 0
    assert lifts_by_brute_force(w) == []
    assert w.recheck()


@pytest.mark.parametrize("k", [0, 2])
def test_non_lift_triangle(k):
    w = non_lifting_witness(2, k, ("0", "1", "2"), chain(2))
    assert w is not None
    assert w.fibrancy.equivalent
    assert lifts_by_brute_force(w) == []
    assert w.recheck()


def test_non_lift_rejects_trivial_horns():
    with pytest.raises(ValueError):
        non_lifting_witness(2, 1, ("0", "1", "2"), chain(2))


def test_non_lift_all_small_posets():
    for size in (1, 2, 3):
        for P in all_posets(size):
            for n in (1, 2):
                for labels in monotone_tuples(P, n + 1):
                    for k in range(n + 1):
                        if classify_horn(labels, n, k, P) != NOT_TRIVIAL:
                            continue
                        w = non_lifting_witness(n, k, labels, P)
                        assert w is not None and w.record["definitive"]
                        assert lifts_by_brute_force(w) == []
