"""The text format: parsing, error positions and round trips."""

from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from corpus import walking_iso_over
from stratsimp.anodyne import prism_certificate, spine_certificate
from stratsimp.decollage import constant_presheaf, representable
from stratsimp.poset import chain
from stratsimp.simplicial import make_generator, simplex
from stratsimp.stratified import make_strat, strat_simplex
from stratsimp.textformat import (
    ParseError,
    Workspace,
    fmt_mapspec,
    parse,
    parse_mapspec,
    parse_nf,
    serialize,
    workspace_of,
)

FIXTURES = sorted(p.name for p in resources.files("stratsimp").joinpath("fixtures").iterdir())

EDGE = """\
poset P
elem 0 1
rel 0 < 1

sset X trunc 1
simplex a dim 0
simplex b dim 0
simplex e dim 1 faces b a

strat X over P as Xs
label a {a}
label b {b}
"""


def fixture(name):
    return resources.files("stratsimp").joinpath("fixtures", name).read_text()


def test_empty_input():
    ws = parse("")
    assert len(ws) == 0 and serialize(ws) == ""
    assert parse("# only a comment\n\n") == Workspace()


def test_example_fixture_loads():
    ws = parse(fixture("example314.strat"))
    X = ws.get("example314", "strat")
    assert X.total.counts() == (3, 2)
    assert sorted(X.labels.values()) == ["0", "0", "1"]
    assert ws.kind_of("I1") == "poset"


def test_decreasing_edge_is_rejected():
    with pytest.raises(ParseError) as err:
        parse(EDGE.format(a="1", b="0"))
    assert "edge e" in str(err.value)
    assert err.value.line == 12  # the second label line


def test_increasing_edge_loads():
    ws = parse(EDGE.format(a="0", b="1"))
    assert ws.get("Xs").labels == {"a": "0", "b": "1"}


def test_duplicate_name_reports_line():
    with pytest.raises(ParseError) as err:
        parse("poset P\nelem 0\n\nposet P\nelem 1\n")
    assert err.value.line == 4 and "duplicate" in str(err.value)


def test_wrong_kind_lookup():
    ws = parse(fixture("example314.strat"))
    with pytest.raises(KeyError):
        ws.get("I1", "strat")
    with pytest.raises(KeyError):
        ws.get("missing")


@pytest.mark.parametrize("bad,where", [
    ("poset P\nelem 0\nrel 0 < 1\n", 3),
    ("sset X trunc 1\nsimplex a dim 1 faces b a\n", 2),
    ("poset P\nelem 0\nfrobnicate\n", 3),
    ("widget W\n", 1),
])
def test_errors_carry_line_numbers(bad, where):
    with pytest.raises(ParseError) as err:
        parse(bad, source="bad.strat")
    assert err.value.line == where
    assert str(err.value).startswith(f"bad.strat:{where}:")


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_round_trip(name):
    ws = parse(fixture(name))
    text = serialize(ws)
    assert parse(text) == ws
    assert serialize(parse(text)) == text


def test_nf_and_mapspec():
    dims = {"a": 0, "e": 1}
    assert parse_nf("e!s0", dims) == ("e", (0, 0, 1))
    assert parse_nf("a", dims) == ("a", (0,))
    with pytest.raises(ValueError):
        parse_nf("f", dims)
    pt, E = simplex(0), simplex(1)
    from stratsimp.simplicial import SimplicialMap

    f = SimplicialMap(E, pt, {(0,): pt.nf((0,)), (1,): pt.nf((0,)), (0, 1): ((0,), (0, 0))})
    spec = fmt_mapspec(f)
    assert parse_mapspec(spec, E, pt).assignment == f.assignment


def test_objects_round_trip():
    P = chain(2)
    items = [
        ("presheaf", representable(P, ("0", "2")), "y02"),
        ("presheaf", constant_presheaf(chain(1), make_generator("boundary", 1)), "const2"),
        ("strat", walking_iso_over(chain(1), ("0", "0")), "E"),
        ("cert", spine_certificate(3), "spine3"),
        ("cert", prism_certificate(2, ("0", "1", "2"), P), "prism"),
    ]
    ws = workspace_of(*items)
    assert parse(serialize(ws)) == ws


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["simplex", "horn", "boundary", "spine"]), st.integers(1, 3), st.data())
def test_generated_round_trip(shape, n, data):
    P = chain(2)
    labels = tuple(sorted(data.draw(st.lists(st.sampled_from("012"), min_size=n + 1, max_size=n + 1))))
    if shape == "simplex":
        X = strat_simplex(P, labels, name="X")
    else:
        args = (shape, n, data.draw(st.integers(0, n))) if shape == "horn" else (shape, n)
        X = make_strat(make_generator(*args), P, {(i,): labels[i] for i in range(n + 1)}, name="X")
    ws = workspace_of(("strat", X, "X"))
    back = parse(serialize(ws))
    Y = back.get(ws.name_of(X), "strat")
    assert Y.total.counts() == X.total.counts()
    assert sorted(Y.labels.values()) == sorted(X.labels.values())
    assert serialize(back) == serialize(ws)
