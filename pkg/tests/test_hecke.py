import pytest

from modpforms.errors import (
    BadPrime,
    NotEigenform,
    OperatorError,
    PrecisionError,
)
from modpforms.fieldseries import FieldContext, QExpansion, equal_up_to, one_series, zero_series
from modpforms.hecke import (
    HeckeOperatorLabel,
    apply_Tl,
    apply_Tn,
    apply_Ul,
    apply_Vp,
    apply_label,
    apply_theta,
    nonordinary_from_ordinary,
    operator_matrix,
    ord_no_decompose,
    required_input_prec,
)
from modpforms.level1 import basis, sturm

F5 = FieldContext(5)
F7 = FieldContext(7)
F11 = FieldContext(11)


def sigma(n, k):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def cusp_form(ctx, k, prec):
    return basis(ctx, k, "cusp", prec).basis[0]


def test_label_parse_and_validate():
    assert HeckeOperatorLabel.parse("T2") == HeckeOperatorLabel("T", 2)
    assert HeckeOperatorLabel.parse("U5") == HeckeOperatorLabel("U", 5)
    assert HeckeOperatorLabel.parse("Vp") == HeckeOperatorLabel("Vp")
    assert HeckeOperatorLabel.parse("theta") == HeckeOperatorLabel("Theta")
    with pytest.raises(OperatorError):
        HeckeOperatorLabel("U", 4)
    with pytest.raises(OperatorError):
        HeckeOperatorLabel("T", 0)
    with pytest.raises(OperatorError):
        HeckeOperatorLabel.parse("X3")


def test_Ul_examples():
    d5 = cusp_form(F5, 12, 10)
    assert apply_Ul(d5, 5).coeffs[1] == 0  # tau(5) = 4830 = 0 mod 5

    assert apply_Ul(one_series(6, 5), 2).coeffs == (1, 0, 0)

    d11 = cusp_form(F11, 12, 23)
    assert apply_Ul(d11, 11).coeffs[1] == 1  # tau(11) = 534612 = 1 mod 11


def test_Ul_precision():
    f = QExpansion((1, 2, 3), p=5)
    assert apply_Ul(f, 2).prec == 1
    with pytest.raises(PrecisionError):
        apply_Ul(f, 5)


def test_Tl_eisenstein_eigenvalue():
    e4 = basis(F7, 4, "full", 12).basis[0]
    t2 = apply_Tl(e4, 4, 2)
    assert equal_up_to(t2, e4.scale(sigma(2, 3)), t2.prec)
    assert sigma(2, 3) % 7 == 2


def test_Tl_zero_and_delta():
    assert apply_Tl(zero_series(8, 5), 12, 2).is_zero()
    d5 = cusp_form(F5, 12, 9)
    assert apply_Tl(d5, 12, 3).coeffs[1] == 252 % 5  # a_1(T_3 f) = a_3(f)


def test_Tl_rejects_working_prime():
    d5 = cusp_form(F5, 12, 10)
    with pytest.raises(BadPrime):
        apply_Tl(d5, 12, 5)


def test_Tn_recursion_T4_on_E4():
    e4 = basis(F11, 4, "full", 20).basis[0]
    t4 = apply_Tn(e4, 4, 4)
    assert equal_up_to(t4, e4.scale(73), t4.prec)
    assert 73 % 11 == 7


def test_Tn_identity_and_multiplicativity():
    d5 = cusp_form(F5, 12, 12)
    assert apply_Tn(d5, 12, 1) == d5
    d7 = cusp_form(F7, 12, 14)
    assert apply_Tn(d7, 12, 6).coeffs[1] == (-6048) % 7  # tau(6) = tau(2)tau(3)
    assert (-6048) % 7 == 0


def test_a1_of_Tn_is_an():
    d5 = cusp_form(F5, 12, 36)
    for n in range(1, 12):
        assert apply_Tn(d5, 12, n).coeffs[1] == d5.coeffs[n]


def test_Vp_spread_and_inverse():
    d5 = cusp_form(F5, 12, 8)
    v = apply_Vp(F5, d5, 12)
    assert v.prec == 5 * 7 + 1
    assert v.coeffs[5] == 1 and all(v.coeffs[n] == 0 for n in range(v.prec) if n % 5)
    assert apply_Vp(F5, zero_series(4, 5), 12).is_zero()
    u = apply_Ul(v, 5)
    assert equal_up_to(u, d5, u.prec)


def test_theta_examples():
    g = cusp_form(F5, 12, 10)
    v = apply_Vp(F5, g, 12)
    th = apply_theta(F5, v, 60)
    assert th.is_zero()

    assert apply_theta(F5, one_series(8, 5), 0).is_zero()

    d7 = cusp_form(F7, 12, 10)
    th7 = apply_theta(F7, d7, 12)
    assert th7.coeffs[2] == (2 * -24) % 7 == 1


def test_theta_precision_error():
    f = QExpansion((0, 1), p=5)
    with pytest.raises(PrecisionError):
        apply_theta(F5, f, 48)  # sturm(54) = 5 > 2 coefficients


def test_operator_matrix_U5_on_S12():
    space = basis(F5, 12, "cusp", 5 * sturm(12))
    m = operator_matrix(space, HeckeOperatorLabel("U", 5))
    assert m == [[0]]


def test_operator_matrix_T1_identity():
    space = basis(F5, 24, "full", 10)
    m = operator_matrix(space, HeckeOperatorLabel("T", 1))
    assert m == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_operator_matrix_T2_charpoly_has_tau2():
    from modpforms.linalg import charpoly

    space = basis(F5, 12, "full", 2 * sturm(12))
    m = operator_matrix(space, HeckeOperatorLabel("T", 2))
    cp = charpoly(m, 5)
    # tau(2) = -24 = 1 mod 5 is a root
    x = 1
    assert sum(c * pow(x, i, 5) for i, c in enumerate(cp)) % 5 == 0


def test_operator_matrix_rejects_weight_changing():
    space = basis(F5, 12, "full", 4)
    with pytest.raises(OperatorError):
        operator_matrix(space, HeckeOperatorLabel("Vp"))


def test_fitting_decomposition_census():
    s12_5 = basis(F5, 12, "cusp", 5 * sturm(12))
    dec = ord_no_decompose(s12_5)
    assert (dec.ordinary.dim, dec.nonordinary.dim) == (0, 1)

    s12_11 = basis(F11, 12, "cusp", 11 * sturm(12))
    dec11 = ord_no_decompose(s12_11)
    assert (dec11.ordinary.dim, dec11.nonordinary.dim) == (1, 0)

    zero = basis(F5, 2, "cusp", 2)
    dec0 = ord_no_decompose(zero)
    assert (dec0.ordinary.dim, dec0.nonordinary.dim) == (0, 0)


def test_fitting_direct_sum_larger_space():
    space = basis(F5, 36, "cusp", 5 * sturm(36))
    dec = ord_no_decompose(space)
    assert dec.ordinary.dim + dec.nonordinary.dim == space.dim


def test_nonordinary_construction_delta_11():
    f = cusp_form(F11, 12, 11 * sturm(132))
    g = nonordinary_from_ordinary(F11, f, 12, a_p=1, test_primes=(2, 3))
    assert apply_Ul(g, 11).is_zero()
    # spot: coefficients away from multiples of 11 match f
    assert g.coeffs[2] == f.coeffs[2]
    assert g.coeffs[11] == (f.coeffs[11] - 1 * f.coeffs[1]) % 11


def test_nonordinary_construction_rejects_bad_input():
    with pytest.raises(NotEigenform):
        nonordinary_from_ordinary(F5, one_series(60, 5), 0, a_p=1)
    f = cusp_form(F5, 12, 60)  # non-ordinary at 5: U_5 f = 0
    with pytest.raises(NotEigenform):
        nonordinary_from_ordinary(F5, f, 12, a_p=0)


def test_required_input_prec():
    p = 5
    labels = [HeckeOperatorLabel("T", 2), HeckeOperatorLabel("U", 5)]
    assert required_input_prec(labels, 3, p) == 30
    assert required_input_prec([HeckeOperatorLabel("Vp")], 11, p) == 3
    assert required_input_prec([], 7, p) == 7


def test_commutation_away_from_p():
    # V_p commutes with T_ell exactly; theta picks up one factor of ell
    d5 = cusp_form(F5, 12, 40)
    lhs = apply_Tl(apply_Vp(F5, d5, 12), 60, 2)
    rhs = apply_Vp(F5, apply_Tl(d5, 12, 2), 12)
    assert equal_up_to(lhs, rhs, min(lhs.prec, rhs.prec))

    th_t = apply_theta(F5, apply_Tl(d5, 12, 2), 12)
    t_th = apply_Tl(apply_theta(F5, d5, 12), 18, 2)
    n = min(th_t.prec, t_th.prec)
    assert equal_up_to(t_th, th_t.scale(2), n)


def test_diamond_is_identity():
    d5 = cusp_form(F5, 12, 6)
    assert apply_label(F5, HeckeOperatorLabel("Diamond", 3), d5, 12) == d5
