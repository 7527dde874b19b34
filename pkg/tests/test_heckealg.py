import pytest

from modpforms.errors import KindError, UsageError
from modpforms.fieldseries import FieldContext
from modpforms.hecke import HeckeOperatorLabel
from modpforms.heckealg import (
    cokernel_report,
    delta_eigensystem,
    duality_pairing,
    generate_algebra,
    hasse_restriction_surjects,
    j_of_k,
    k_pk_check,
    periodicity_check,
    serre_quotient,
    socle_dim,
    twist_check,
    vp_intersection_dim,
)
from modpforms.level1 import basis, sturm

F5 = FieldContext(5)
F7 = FieldContext(7)


def cusp_space(ctx, k, bound=7):
    prec = max(bound, ctx.p) * sturm(k)
    return basis(ctx, k, "cusp", prec)


def test_algebra_on_one_dimensional_space():
    space = cusp_space(F7, 12)
    for include_p in (True, False):
        alg = generate_algebra(space, 7, include_p)
        assert alg.dim == 1
        assert not alg.degenerate


def test_algebra_zero_space_degenerate():
    space = basis(F5, 2, "cusp", 4)
    alg = generate_algebra(space, 7, True)
    assert alg.dim == 0 and alg.degenerate


def test_algebra_closure_closed_under_multiplication():
    from modpforms import linalg

    space = cusp_space(F5, 36)
    alg = generate_algebra(space, 7, include_p=True)
    span = linalg.RowSpan(space.dim**2, 5)
    for m in alg.basis_matrices:
        span.add([x for row in m for x in row])
    assert span.dim == alg.dim
    for a in alg.basis_matrices:
        for b in alg.basis_matrices:
            prod = linalg.matmul([list(r) for r in a], [list(r) for r in b], 5)
            assert span.contains([x for row in prod for x in row])
    # contains the identity
    assert span.contains([x for row in linalg.identity(space.dim) for x in row])


def test_algebra_generator_order_irrelevant():
    # same span whether or not U_p comes last: closure is span-determined
    space = cusp_space(F5, 60)
    a1 = generate_algebra(space, 7, include_p=True)
    a2 = generate_algebra(space, 7, include_p=True)
    assert a1.basis_matrices == a2.basis_matrices  # deterministic


def test_duality_S12_F7():
    space = cusp_space(F7, 12)
    alg = generate_algebra(space, 7, include_p=True)
    pairing, verdict = duality_pairing(alg, space)
    assert pairing == [[1]]
    assert verdict.perfect


def test_duality_S24_F5_full_rank():
    space = cusp_space(F5, 24)
    alg = generate_algebra(space, 7, include_p=True)
    pairing, verdict = duality_pairing(alg, space)
    assert verdict.rank == verdict.dim_space == 2
    assert verdict.perfect


def test_duality_S60_F5_anemic_rank():
    space = cusp_space(F5, 60)
    full = generate_algebra(space, 7, include_p=True)
    anemic = generate_algebra(space, 7, include_p=False)
    _, v_full = duality_pairing(full, space)
    _, v_anemic = duality_pairing(anemic, space)
    assert v_full.perfect and v_full.rank == 5
    assert v_anemic.dim_algebra == 4 == 5 - v_anemic.dim_vp_intersection
    assert v_anemic.perfect


def test_duality_rejects_full_space():
    space = basis(F5, 12, "full", 10)
    alg = generate_algebra(cusp_space(F5, 12), 7, True)
    with pytest.raises(KindError):
        duality_pairing(alg, space)


def test_vp_intersection_dim():
    space = cusp_space(F5, 60)
    assert vp_intersection_dim(space) == 1
    assert vp_intersection_dim(cusp_space(F5, 24)) == 0


def test_j_of_k():
    assert j_of_k(5, 60) == 12
    assert j_of_k(5, 12) == 0
    assert j_of_k(5, 6) is None
    assert j_of_k(7, 4) is None
    assert j_of_k(5, 100) == 20


def test_cokernel_report_k60():
    rep = cokernel_report(F5, 60, "cusp")
    assert rep.j_of_k == 12
    assert rep.dim_cokernel == rep.dim_weight_j_space == rep.dim_vp_intersection == 1
    assert rep.verdict


def test_cokernel_report_small_weights():
    rep = cokernel_report(F5, 12, "cusp")
    assert rep.dim_cokernel == 0 and rep.verdict
    rep4 = cokernel_report(F7, 4, "cusp")
    assert rep4.dim_cokernel == 0 and rep4.verdict


def test_cokernel_report_nonordinary_kind():
    rep = cokernel_report(F5, 60, "cusp-nonordinary")
    assert rep.verdict


def test_cokernel_rejects_odd_weight():
    with pytest.raises(UsageError):
        cokernel_report(F5, 13, "cusp")


def test_serre_quotient_dimensions():
    assert serre_quotient(F5, 12).dim == 1
    assert serre_quotient(F5, 4).dim == 0
    assert serre_quotient(F7, 6).dim == 0
    # below p-1 the subspace is empty and S(k) = M_k
    assert serre_quotient(F7, 4).dim == 1


def test_serre_quotient_charpoly_T2():
    quot = serre_quotient(F5, 12, 2 * sturm(12))
    cp = quot.charpoly(HeckeOperatorLabel("T", 2))
    assert cp == (4, 1)  # x - 1


def test_serre_quotient_rejects_up():
    quot = serre_quotient(F5, 12)
    with pytest.raises(UsageError):
        quot.induced_matrix(HeckeOperatorLabel("U", 5))


def test_periodicity_p5():
    for k in range(12, 21, 2):
        rep = periodicity_check(F5, k, HeckeOperatorLabel("T", 2))
        assert rep.verdict, (k, rep)


def test_periodicity_vacuous():
    rep = periodicity_check(F5, 4, HeckeOperatorLabel("T", 2))
    assert rep.dim_a == rep.dim_b == 0
    assert rep.verdict


def test_twist_check_examples():
    rep = twist_check(F5, 12, 2)
    assert rep.verdict
    # eigenvalue 1 on S(12) becomes 2 on S(18)
    assert rep.charpoly_a == (4, 1)
    assert rep.charpoly_b == (3, 1)  # x - 2
    assert twist_check(F7, 12, 3).verdict


def test_k_pk_check_examples():
    assert k_pk_check(F5, 12, 2).verdict
    rep = k_pk_check(F7, 16, 3)
    assert rep.verdict
    assert k_pk_check(F5, 4, 2).verdict  # vacuous-ish small case


def test_socle_dim_delta_eigensystem():
    eig = delta_eigensystem(5, (2, 3))
    assert eig == {2: 1, 3: 2}
    assert socle_dim(F5, 12, eig) == 1
    assert socle_dim(F5, 12, {2: 0, 3: 0}) == 0


def test_socle_requires_eigensystem():
    with pytest.raises(UsageError):
        socle_dim(F5, 12, {})


def test_hasse_restriction_surjection():
    assert hasse_restriction_surjects(F5, 20)
    assert hasse_restriction_surjects(F5, 24)
    assert hasse_restriction_surjects(F7, 12)
