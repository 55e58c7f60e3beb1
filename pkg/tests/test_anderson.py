"""Omega, Anderson-Thakur polynomials, deformation series, block systems,
vanishing orders, and the Carlitz tensor-power module."""

import pytest

from ffzeta import anderson, zeta
from ffzeta.anderson import GradedSeries
from ffzeta.errors import BudgetError, ConvergenceError, DomainError
from ffzeta.indices import g_map
from ffzeta.laurent import Laurent
from ffzeta.scalar import (
    BiPoly,
    Poly,
    RatFunc,
    TVAR,
    bracket_L,
    carlitz_gamma,
    field,
)


def at_inputs(fld, s):
    return [anderson.at_polynomial(fld, sj - 1) for sj in s]


# -- omega -----------------------------------------------------------------------

def test_omega_unit_constant_term_is_one():
    w = anderson.omega_unit(field(3), 5, 30)
    assert w.coeffs[0].agrees_with(Laurent.one(field(3)))


def test_omega_unit_linear_coefficient():
    fld = field(2)
    w = anderson.omega_unit(fld, 4, 20)
    acc = Laurent.zero(fld)
    i = 1
    while 2 ** i <= 20:
        acc = acc + Laurent.monomial(fld, 1, 2 ** i)
        i += 1
    assert w.coeffs[1].agrees_with(acc.scale(-1))


@pytest.mark.parametrize("q,cap,prec", [(2, 6, 30), (3, 8, 40), (2, 1, 10), (5, 4, 30)])
def test_omega_unit_equation(q, cap, prec):
    assert anderson.omega_unit_equation_check(field(q), cap, prec)


def test_graded_series_twist_grade_closure():
    fld = field(3)
    om = anderson.omega(fld, 5, 40)
    tw = om.twist()
    assert tw.grade == om.grade
    prod = om * om
    assert prod.grade == -2 * fld.q


def test_omega_twist_difference_equation_in_graded_form():
    # Omega = (t - theta^q) * Omega^(1) as graded series
    fld = field(3)
    cap, prec = 6, 40
    om = anderson.omega(fld, cap, prec)
    rhs = om.twist() * BiPoly.t_minus_theta_power(fld, fld.q, 1)
    assert om.agrees_with(rhs)


# -- AT polynomials ----------------------------------------------------------------

def test_at_polynomial_small_values():
    f3 = field(3)
    assert anderson.at_polynomial(f3, 0) == BiPoly.one(f3)
    assert anderson.at_polynomial(f3, 1) == BiPoly.one(f3)
    assert anderson.at_polynomial(f3, 2) == BiPoly.one(f3)
    # hand-computed: H_3 = 2 t^3 - t - theta^3 over F_3
    h3 = anderson.at_polynomial(f3, 3)
    assert h3 == BiPoly(f3, [[0, 0, 0, 2], [2, 0, 0, 0], [0, 0, 0, 0], [2, 0, 0, 0]])
    f2 = field(2)
    assert anderson.at_polynomial(f2, 2) == BiPoly(f2, [[0, 0, 1], [1, 0, 0]])  # t + theta^2
    assert anderson.at_polynomial(f2, 3) == BiPoly(f2, [[0], [1], [1]])   # t^2 + t (single theta column)


def test_at_polynomial_closed_forms():
    for q in (2, 3):
        fld = field(q)
        n = q * q - q - 1
        assert anderson.at_polynomial(fld, n) == BiPoly.from_poly(
            carlitz_gamma(fld, q * q - q).with_var(TVAR)
        )
        n = q ** 3 - 1
        assert anderson.at_polynomial(fld, n) == BiPoly.from_poly(
            carlitz_gamma(fld, q ** 3).with_var(TVAR)
        )


def test_at_polynomial_budget():
    with pytest.raises(BudgetError):
        anderson.at_polynomial(field(2), 401)


# -- deformation values ---------------------------------------------------------------

def test_deformation_depth1_matches_gamma_zeta():
    for q in (2, 3):
        fld = field(q)
        for n in (1, 2, 4):
            dv = anderson.deformation_value(fld, (n,), at_inputs(fld, (n,)), 50)
            gz = Laurent.from_poly(carlitz_gamma(fld, n)) * zeta.mzv(fld, (n,), 60)
            assert dv.agrees_with(gz), (q, n)


def test_deformation_depth2_and_depth3():
    fld = field(3)
    for s in [(2, 1), (1, 2), (2, 1, 1)]:
        gamma = Poly.one(fld)
        for sj in s:
            gamma = gamma * carlitz_gamma(fld, sj)
        dv = anderson.deformation_value(fld, s, at_inputs(fld, s), 50)
        gz = Laurent.from_poly(gamma) * zeta.mzv(fld, s, 60)
        assert dv.agrees_with(gz), s


def test_deformation_identity_41_termwise_exact():
    # the pi-cancelled interpolation identity, checked exactly in F_q(theta)
    for q in (2, 3):
        fld = field(q)
        for n in range(1, q * q + q + 1):
            h = anderson.at_polynomial(fld, n - 1)
            gamma = RatFunc.from_poly(carlitz_gamma(fld, n))
            for d in range(4):
                from ffzeta.scalar import frobenius_twist, poly_eval_at_theta_power

                lhs = gamma * zeta.power_sum_exact(fld, d, n)
                hd = poly_eval_at_theta_power(frobenius_twist(h, d), 0)
                assert lhs == RatFunc(hd, bracket_L(fld, d) ** n), (q, n, d)


def test_deformation_constant_inputs_match_cmpl():
    fld = field(3)
    theta = RatFunc.from_poly(Poly.gen(fld))
    for s, us in [((2,), [theta]), ((1,), [RatFunc.one(fld)]), ((2, 1), [theta, 1])]:
        dv = anderson.deformation_value(fld, s, us, 40)
        cv = zeta.cmpl(fld, s, [u if isinstance(u, RatFunc) else RatFunc.constant(fld, u) for u in us], 40)
        assert dv.agrees_with(cv), s


def test_deformation_sign_inputs_match_amzv():
    fld = field(3)
    for s, eps in [((1,), (-1,)), ((2,), (-1,)), ((2, 1), (-1, 1)), ((1, 2), (-1, -1))]:
        dv = anderson.deformation_value(fld, s, at_inputs(fld, s), 40, eps=eps)
        av = zeta.amzv(fld, s, eps, 40)
        assert dv.agrees_with(av), (s, eps)


def test_deformation_divergent_input_rejected():
    fld = field(2)
    with pytest.raises(ConvergenceError):
        anderson.deformation_value(fld, (1,), [Poly.monomial(fld, 1, 2)], 20)


def test_specialization_frobenius_check():
    for q in (2, 3):
        fld = field(q)
        for s in [(1,), (2,)]:
            assert anderson.specialization_frobenius_check(fld, s, at_inputs(fld, s), 30)


def test_specialization_frobenius_check_nonconstant_inputs():
    # H_3 at q=3 carries a theta^3 term, exercising the coefficient twists
    fld = field(3)
    assert anderson.specialization_frobenius_check(fld, (4,), at_inputs(fld, (4,)), 40)
    assert anderson.specialization_frobenius_check(fld, (4, 1), at_inputs(fld, (4, 1)), 40)
    f2 = field(2)
    assert anderson.specialization_frobenius_check(f2, (3,), at_inputs(f2, (3,)), 40)


def test_depth1_l_recursion_standalone():
    # forward-twisted (j = 1) recursion: L_1 = L_1^(1) + Omega^s Q
    fld = field(3)
    cap, prec = 6, 40
    for s, q_in in [((1,), at_inputs(fld, (1,))), ((2,), at_inputs(fld, (2,)))]:
        l1 = anderson.deformation_t_series(fld, s, q_in, cap, prec)[0]
        a = anderson.omega(fld, cap, prec) ** s[0]
        qg = GradedSeries.from_bipoly(q_in[0] if isinstance(q_in[0], BiPoly) else BiPoly.from_poly(q_in[0]), cap)
        rhs = l1.twist() + (a * qg)
        assert l1.agrees_with(rhs)


# -- block systems -----------------------------------------------------------------

def test_single_block_system_shape_and_check():
    fld = field(3)
    system = anderson.build_block_system(fld, [(4,)], [at_inputs(fld, (4,))], [1], 8, 40)
    assert len(system.phi) == 2
    # Phi' is the 1x1 block (t - theta)^w
    assert system.phi[0][0] == BiPoly.t_minus_theta_power(fld, 1, 4)
    assert anderson.verify_difference_system(system)


def test_two_block_system_shapes_and_nu_entries():
    fld = field(3)
    fam = [(4,), (3, 1)]
    qs = [at_inputs(fld, s) for s in fam]
    system = anderson.build_block_system(fld, fam, qs, [1, 1], 8, 40)
    assert system.shapes == (1, 2)
    assert len(system.phi) == 3  # 1 + (2-1) + 1
    from ffzeta.scalar import inverse_twist

    # nu entries carry Q^(-1) (t - theta)^s per the block display
    last = len(system.phi) - 1
    want_col0 = inverse_twist(qs[0][0]) * BiPoly.t_minus_theta_power(fld, 1, 4)
    assert system.phi[last][0] == want_col0
    want_mid = inverse_twist(qs[1][1]) * BiPoly.t_minus_theta_power(fld, 1, 1)
    assert system.phi[last][1] == want_mid
    # D-column entry: Q_11^(-1) (t - theta)^w
    assert system.phi[1][0] == inverse_twist(qs[1][0]) * BiPoly.t_minus_theta_power(fld, 1, 4)
    assert anderson.verify_difference_system(system)


def test_two_block_system_q2():
    fld = field(2)
    fam = [(4,), (3, 1)]
    system = anderson.build_block_system(
        fld, fam, [at_inputs(fld, s) for s in fam], [1, 1], 8, 40
    )
    assert anderson.verify_difference_system(system)


def test_block_system_with_t_coefficients():
    # nontrivial a_i in F_q[t] still satisfies the difference equation
    fld = field(3)
    fam = [(4,), (3, 1)]
    a = [Poly(fld, [1, 2], TVAR), Poly(fld, [0, 1], TVAR)]
    system = anderson.build_block_system(
        fld, fam, [at_inputs(fld, s) for s in fam], a, 8, 40
    )
    assert anderson.verify_difference_system(system)


def test_block_system_shape_mismatch():
    fld = field(3)
    with pytest.raises(DomainError):
        anderson.build_block_system(fld, [(4,), (3, 1)], [at_inputs(fld, (4,))], [1, 1], 8, 40)
    with pytest.raises(DomainError):
        anderson.build_block_system(fld, [(4,), (3, 2)], [at_inputs(fld, (4,)), at_inputs(fld, (3, 2))], [1, 1], 8, 40)


# -- vanishing orders ----------------------------------------------------------------

def test_vanishing_orders_examples():
    fld = field(3)
    assert anderson.vanishing_order_profile(fld, (4,), at_inputs(fld, (4,)), 8, 60) == frozenset()
    p = anderson.vanishing_order_profile(fld, (3, 1), at_inputs(fld, (3, 1)), 8, 60)
    assert p == g_map((3, 1)) == frozenset({1})


def test_vanishing_orders_match_g_small_cases():
    fld = field(3)
    for s in [(2, 1), (1, 2), (2, 2)]:
        p = anderson.vanishing_order_profile(fld, s, at_inputs(fld, s), 10, 80)
        assert p == g_map(s), s


# -- tensor powers ---------------------------------------------------------------------

def test_tensor_action_examples():
    f2 = field(2)
    theta = RatFunc.from_poly(Poly.gen(f2))
    assert anderson.carlitz_tensor_t_action(f2, 1, [theta])[0].is_zero
    f3 = field(3)
    out = anderson.carlitz_tensor_t_action(f3, 2, [0, 0])
    assert all(v.is_zero for v in out)
    out = anderson.carlitz_tensor_t_action(f3, 2, [1, 0])
    assert out[0] == RatFunc.from_poly(Poly.gen(f3)) and out[1] == RatFunc.one(f3)


def test_torsion_search_examples():
    f2 = field(2)
    theta = RatFunc.from_poly(Poly.gen(f2))
    assert anderson.torsion_search(f2, 1, [theta], 3) == Poly(f2, [0, 1], TVAR)
    f3 = field(3)
    assert anderson.torsion_search(f3, 1, [1], 4) is None
    assert anderson.torsion_search(f3, 1, [0], 4) == Poly.one(f3, TVAR)


def test_torsion_free_points_when_dimension_not_divisible():
    # k-rational points of C^{x n} are torsion-free unless (q-1) | n
    f3 = field(3)
    theta = RatFunc.from_poly(Poly.gen(f3))
    for n in (1, 3):  # q - 1 = 2 does not divide these
        for point in ([1] + [0] * (n - 1), [theta] + [0] * (n - 1)):
            assert anderson.torsion_search(f3, n, point, 3) is None, (n, point)
