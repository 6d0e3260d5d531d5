from collections import Counter
from fractions import Fraction as F

import pytest

import goldens as G
from bsroots import bsengine
from bsroots.arrangements import arrangement, expand, intersection_points, parse_lines, split_factors
from bsroots.errors import InputError, PolySyntaxError
from bsroots.polyring import parse_expr


def test_split_factors():
    assert split_factors("x*y*(x+2*y-z)") == ["x", "y", "(x+2*y-z)"]
    with pytest.raises(PolySyntaxError):
        split_factors("x*(y+z")
    with pytest.raises(PolySyntaxError):
        split_factors("x**y")


def test_lines_normalized_and_expanded():
    lines = parse_lines("(-2*x+4*z)*y*(1/3*x+y)", "xyz")
    assert lines == [(1, 0, -2), (0, 1, 0), (1, 3, 0)]
    assert expand(lines) == parse_expr("(x-2*z)*y*(x+3*y)", "xyz")


@pytest.mark.parametrize("text", ["x*y*(2*x)", "x*(y-z)*(2*z-2*y)"])
def test_repeated_line_rejected(text):
    with pytest.raises(InputError):
        parse_lines(text, "xyz")


@pytest.mark.parametrize("text", ["x*y^2", "x*(y+1)", "x*y*z*w"])
def test_non_linear_factor_rejected(text):
    with pytest.raises((InputError, PolySyntaxError)):
        parse_lines(text, "xyzw"[:3])


def test_pencil_is_one_point():
    pts = intersection_points(parse_lines("x*y*(x+y)*(x-y)", "xyz"))
    assert pts == {(0, 0, 1): 4}


def test_generic_arrangement_only_nodes():
    f, szd = arrangement("x*y*z*(x+y+z)", "xyz")
    assert szd.n_points == 6 and szd.all_odp and szd.mu_Z == 6
    assert f.degree == 4


@pytest.mark.parametrize("text", [G.WALTHER_1, G.WALTHER_2, G.ZIEGLER])
def test_degree_nine_multiplicities(text):
    mult = Counter(intersection_points(parse_lines(text, "xyz")).values())
    assert mult == Counter({3: 6, 2: 18})
    _, szd = arrangement(text, "xyz")
    assert szd.mu_Z == 6 * 4 + 18
    assert szd.R_Z == {F(2, 3), F(1), F(4, 3)}


def _delta(text):
    f, _ = arrangement(text, "xyz")
    return bsengine.compute_tables(f)["delta"]


def test_walther_delta_degrees():
    d1, d2 = _delta(G.WALTHER_1), _delta(G.WALTHER_2)
    assert max(d1.support()) == 16
    assert max(d2.support()) == 15


def test_walther_matches_ziegler():
    d1, dz = _delta(G.WALTHER_1), _delta(G.ZIEGLER)
    assert d1.values == dz.values
    assert d1.poly_string() == ("T^16+5T^15+9T^14+12T^13+14T^12+15T^11+15T^10+14T^9"
                                "+15T^8+14T^7+10T^6+6T^5+3T^4+T^3")


def test_sixteen_ninths_separates_the_walther_pair():
    roots = []
    for text in (G.WALTHER_1, G.WALTHER_2):
        f, szd = arrangement(text, "xyz")
        roots.append(bsengine.analyze(f, szd).R_f)
    assert F(16, 9) in roots[0]
    assert F(16, 9) not in roots[1]
