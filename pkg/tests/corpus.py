"""Small objects shared by the test modules and the acceptance suite."""

from stratsimp.decollage import Presheaf, constant_presheaf, perturbed_constant, representable
from stratsimp.poset import all_posets, chain
from stratsimp.simplicial import FiniteCategory, SimplicialMap, make_generator, simplex
from stratsimp.stratified import make_strat, strat_from_category


def small_posets(max_size=3):
    return [P for n in range(1, max_size + 1) for P in all_posets(n)]


def collapsing_presheaf():
    """Over [1]: two points on ``0<1`` sent to the single point on each vertex."""
    P = chain(1)
    two, pt = make_generator("boundary", 1), simplex(0)
    collapse = SimplicialMap(two, pt, {v: pt.nf((0,)) for v in two.nondeg()})
    vals = {("0",): pt, ("1",): pt, ("0", "1"): two}
    res = {(("0", "1"), ("0",)): collapse, (("0", "1"), ("1",)): collapse}
    return Presheaf(P, vals, res, name="collapse")


def edge_presheaf():
    """Over [1]: constant at the edge ``Δ¹``."""
    return constant_presheaf(chain(1), simplex(1), name="const_edge")


def presheaf_corpus():
    """Constant point presheaves and every representable over posets of size at most 3, plus extras."""
    out = []
    for P in small_posets(3):
        out.append((f"const {P!r}", constant_presheaf(P, simplex(0))))
        for s in P.strings():
            out.append((f"y{'<'.join(s)} {P!r}", representable(P, s)))
    out.append(("const_edge", edge_presheaf()))
    out.append(("perturbed [2]", perturbed_constant(chain(2), ("0", "1", "2"))))
    out.append(("collapse", collapsing_presheaf()))
    return out


def walking_iso_over(P, labels, name="E"):
    C = FiniteCategory.from_presentation(["x", "y"], {"u": ("x", "y")}, invertible=["u"], name=name)
    return strat_from_category(C, P, {"x": labels[0], "y": labels[1]}, trunc_dim=5, name=name)


def fibrant_categories():
    """Fibrant category-presented stratified objects over posets of size at most 3."""
    out = []
    P1, P2 = chain(1), chain(2)
    arrow = FiniteCategory.from_preorder(["a", "b"], [("a", "b")], name="arrow")
    out.append(("arrow 0<1", strat_from_category(arrow, P1, {"a": "0", "b": "1"}, trunc_dim=5)))
    out.append(("iso in 0", walking_iso_over(P1, ("0", "0"))))
    tri = FiniteCategory.from_preorder(["a", "b", "c"], [("a", "b"), ("b", "c")], name="tri")
    out.append(("chain [2]", strat_from_category(tri, P2, {"a": "0", "b": "1", "c": "2"}, trunc_dim=5)))
    C = FiniteCategory.from_presentation(
        ["x", "y", "w", "z"], {"a": ("x", "y"), "u": ("y", "w"), "b": ("w", "z")}, invertible=["u"], name="xywz"
    )
    out.append(("iso inside", strat_from_category(C, P2, {"x": "0", "y": "1", "w": "1", "z": "2"}, trunc_dim=5)))
    two = FiniteCategory.from_presentation(["x", "y"], {"f": ("x", "y"), "g": ("x", "y")}, name="two")
    out.append(("parallel", strat_from_category(two, P1, {"x": "0", "y": "1"}, trunc_dim=5)))
    span = FiniteCategory.from_preorder(["a", "b", "c"], [("a", "b"), ("a", "c")], name="span")
    out.append(("span", strat_from_category(span, P2, {"a": "0", "b": "1", "c": "2"}, trunc_dim=5)))
    return out


def horn20(P, labels, name="L20"):
    H = make_generator("horn", 2, 0)
    return make_strat(H, P, {(i,): labels[i] for i in range(3)}, name=name)
