from math import comb

import pytest

from modpforms.errors import DegreeError, ScenarioError, UsageError
from modpforms.fieldseries import FieldContext
from modpforms.commalg import (
    TruncatedLocalRing,
    hilbert_function,
    hilbert_limit_compare,
    is_regular_up_to,
    monomials_of_degree,
    parse_poly,
)

F5 = FieldContext(5)


def ring(variables, relations, trunc, ctx=F5):
    return TruncatedLocalRing.make(ctx, variables, relations, trunc)


def test_monomial_enumeration():
    assert monomials_of_degree(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert len(monomials_of_degree(4, 3)) == comb(3 + 3, 3)


def test_parse_poly():
    f = parse_poly("x*y - c", ["x", "y", "c"], 5)
    assert f == {(1, 1, 0): 1, (0, 0, 1): 4}
    g = parse_poly("2*x^2 + 3*x^2", ["x"], 5)
    assert g == {(2,): 0} or g == {}
    h = parse_poly("y**2", ["y"], 7)
    assert h == {(2,): 1}
    with pytest.raises(ScenarioError):
        parse_poly("x + w", ["x", "y"], 5)
    with pytest.raises(ScenarioError):
        parse_poly("x^", ["x"], 5)


def test_relations_must_be_local():
    with pytest.raises(UsageError):
        ring(["x"], ["x - 1"], 4)


def test_hilbert_free_ring_four_vars():
    r = ring(["x1", "x2", "x3", "a"], [], 6)
    assert hilbert_function(r).coeffs == (1, 4, 10, 20, 35, 56, 84)


def test_hilbert_one_quadric_five_vars():
    r = ring(["x1", "x2", "x3", "y", "a"], ["y*a"], 5)
    assert hilbert_function(r).coeffs == (1, 5, 14, 30, 55, 91)


def test_hilbert_artinian():
    r = ring(["x"], ["x^2"], 3)
    assert hilbert_function(r).coeffs == (1, 1, 0, 0)


@pytest.mark.parametrize("nvars", [1, 2, 3, 4, 5, 6])
def test_hilbert_free_matches_binomials(nvars):
    d = 10 if nvars <= 4 else 6
    r = ring([f"x{i}" for i in range(nvars)], [], d)
    h = hilbert_function(r)
    for n in range(d + 1):
        assert h[n] == comb(n + nvars - 1, nvars - 1)


def test_koszul_check_regular_quadric():
    # f = xy is regular in F5[[x,y]]; quotient Hilbert drops by H(n-2)
    free = ring(["x", "y"], [], 8)
    quot = ring(["x", "y"], ["x*y"], 8)
    hf, hq = hilbert_function(free), hilbert_function(quot)
    for n in range(9):
        expected = hf[n] - (hf[n - 2] if n >= 2 else 0)
        assert hq[n] == expected


def test_koszul_check_split_quadric():
    free = ring(["x", "y"], [], 8)
    quot = ring(["x", "y"], ["x^2 + y^2"], 8)
    hf, hq = hilbert_function(free), hilbert_function(quot)
    for n in range(9):
        expected = hf[n] - (hf[n - 2] if n >= 2 else 0)
        assert hq[n] == expected


def test_regular_xy_minus_c():
    r = ring(["x", "y", "c"], [], 6)
    assert is_regular_up_to(r, "x*y - c", 4)


def test_not_regular_zero_divisor():
    r = ring(["x", "y"], ["x*y"], 6)
    assert not is_regular_up_to(r, "x", 3)


def test_regular_in_power_series_line():
    r = ring(["x"], [], 6)
    assert is_regular_up_to(r, "x", 5)


def test_regularity_monotone():
    r = ring(["x", "y", "c"], [], 8)
    assert is_regular_up_to(r, "x*y - c", 6)
    for dp in range(6):
        assert is_regular_up_to(r, "x*y - c", dp)


def test_unit_is_regular():
    r = ring(["x"], ["x^3"], 4)
    assert is_regular_up_to(r, "1 + x", 1)


def test_zero_not_regular():
    r = ring(["x"], [], 4)
    assert not is_regular_up_to(r, "0", 2)


def test_regularity_degree_error():
    r = ring(["x", "y"], [], 4)
    with pytest.raises(DegreeError):
        is_regular_up_to(r, "x*y", 3)


def test_limit_compare_constant_sequence():
    target = ring(["x", "y"], ["x*y"], 5)
    seq = [target, target, target]
    rep = hilbert_limit_compare(seq, target, 4)
    assert rep.stabilized_at == (0, 0, 0, 0, 0)


def test_limit_compare_growing_annihilator():
    target = ring(["x", "y"], ["x*y"], 6)
    seq = [ring(["x", "y"], ["x*y", f"x^{n}"], 6) for n in range(1, 7)]
    rep = hilbert_limit_compare(seq, target, 4)
    assert rep.stabilized_at == (0, 1, 2, 3, 4)


def test_limit_compare_not_stabilized():
    target = ring(["x", "y"], ["x*y"], 5)
    seq = [ring(["x", "y"], [], 5) for _ in range(4)]
    rep = hilbert_limit_compare(seq, target, 3)
    assert rep.stabilized_at[0] == 0
    assert rep.stabilized_at[1] == 0
    assert rep.stabilized_at[2] is None
    assert rep.stabilized_at[3] is None


def test_limit_compare_validation():
    target = ring(["x", "y"], [], 5)
    with pytest.raises(UsageError):
        hilbert_limit_compare([], target, 3)
    with pytest.raises(UsageError):
        hilbert_limit_compare([ring(["x"], [], 5)], target, 3)
    with pytest.raises(DegreeError):
        hilbert_limit_compare([ring(["x", "y"], [], 2)], target, 3)


def test_ring_from_dict():
    r = TruncatedLocalRing.from_dict(
        {"p": 5, "vars": ["x1", "x2", "x3", "y", "a"], "relations": ["y*a"], "trunc": 5}
    )
    assert hilbert_function(r).coeffs == (1, 5, 14, 30, 55, 91)
    with pytest.raises(ScenarioError):
        TruncatedLocalRing.from_dict({"vars": ["x"]})
