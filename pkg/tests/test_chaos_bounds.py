import math

import numpy as np
import pytest

from pam_moments.chaos_bounds import (
    FractionalParams,
    admissible_param_grid,
    fit_envelope_constants,
    fit_p_exponent,
    fit_time_exponent,
    gamma_n,
    gamma_n_matrix,
    log_chaos_series,
    moment_bound,
    spatial_exponents,
    stirling_lb_check,
    term_bound,
    theta,
    tilde_exponents,
    verify_ab_condition,
)
from pam_moments.chaos_bounds import _envelope_exponent, _log_term_sum_exact
from pam_moments.errors import DomainError, EstimationError, SizeError, ValidationError
from pam_moments.initial_data import LebesgueConstant
from pam_moments.path_combinatorics import (
    diagonal_touch_points,
    enumerate_exponent_vectors,
    move_down,
)
from pam_moments.simplex_integrals import SimplexIntegralSpec, log_closed_form

P_REF = FractionalParams(0.75, 0.3)


def test_params_validation():
    with pytest.raises(ValidationError):
        FractionalParams(0.5, 0.3)  # H0 must exceed 1/2
    with pytest.raises(ValidationError):
        FractionalParams(0.75, 0.6)  # H must be below 1/2
    with pytest.raises(ValidationError):
        FractionalParams(0.6, 0.1)  # H0 + H must exceed 3/4
    p = FractionalParams(0.75, 0.3)
    assert p.alpha_H0 == pytest.approx(0.75 * 0.5)
    assert p.time_growth_exponent == pytest.approx(0.8)


def test_c_H_constant():
    # c = Gamma(2H+1) sin(pi H) / (2 pi); at H = 1/2 this is 1 / (2 pi)
    # times Gamma(2) sin(pi/2) = 1, recovering the white-noise constant
    p = FractionalParams(0.9, 0.49999999)
    assert p.c_H == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-6)


def test_admissible_grid():
    grid = admissible_param_grid()
    assert len(grid) > 0
    for p in grid:
        assert 0.5 < p.H0 < 1.0 and 0.0 < p.H < 0.5 and p.H0 + p.H > 0.75


def test_tilde_exponents_worked_example():
    p = FractionalParams(0.75, 0.25)
    te = tilde_exponents((0.5, 0.5), p)
    assert te.alpha_tilde == pytest.approx((-0.5, 0.0))
    assert te.beta_tilde == pytest.approx((-0.5, -0.5))


def test_theta_closed_form_matches_cumulative_definition():
    for p in (P_REF, FractionalParams(0.85, 0.2)):
        c = (1.0 - 2.0 * p.H) / (4.0 * p.H0)
        for a in enumerate_exponent_vectors(6):
            alpha = spatial_exponents(a, p)
            te = tilde_exponents(alpha, p)
            sums = np.cumsum(np.asarray(te.alpha_tilde) + np.asarray(te.beta_tilde))
            for k in range(1, 7):
                direct = sums[k - 1] + k + 1
                assert theta(k, a, p) == pytest.approx(direct, rel=1e-12)


def test_ab_condition_over_family():
    for p in admissible_param_grid():
        for n in (1, 4, 8, 12):
            for a in enumerate_exponent_vectors(n):
                alpha = spatial_exponents(a, p)
                te = tilde_exponents(alpha, p)
                ok = verify_ab_condition(te.alpha_tilde, te.beta_tilde, alpha)
                assert ok
            if n > 8:
                break  # the full sweep lives in the acceptance suite


def test_gamma_all_ones_is_exactly_one():
    for p in admissible_param_grid():
        for n in (2, 5, 9, 12):
            assert gamma_n((1,) * n, p) == pytest.approx(1.0, abs=1e-12)


def test_gamma_matrix_agrees_with_scalar():
    g = gamma_n_matrix(5, P_REF)
    vecs = enumerate_exponent_vectors(5)
    for a, gv in zip(vecs, g):
        assert gv == pytest.approx(gamma_n(a, P_REF), rel=1e-13)


def test_gamma_matches_simplex_integral_ratio():
    # gamma_n is the ratio of the ordered-simplex integral at the tilde
    # exponents to the same integral at the all-ones exponents, up to the
    # explicit first-slot and beta-slot gamma factors shared by both; the
    # closed form of each integral provides an independent check
    p = P_REF
    for a in [(1, 2, 0, 1), (2, 0, 1, 1), (1, 1, 2, 0), (2, 0, 2, 0, 1)]:
        n = len(a)
        alpha = spatial_exponents(a, p)
        te = tilde_exponents(alpha, p)
        spec = SimplexIntegralSpec(1.0, te.alpha_tilde, te.beta_tilde)
        total = sum(te.alpha_tilde) + sum(te.beta_tilde) + n + 1
        log_g = (
            log_closed_form(spec)
            - math.lgamma(te.alpha_tilde[0] + 1.0)
            - sum(math.lgamma(b + 1.0) for b in te.beta_tilde)
            + math.lgamma(total)
        )
        assert math.exp(log_g) == pytest.approx(gamma_n(a, p), rel=1e-10)


def test_gamma_exceeds_one_for_endpoint_heavy_vectors():
    # regression pin: the gamma product is NOT bounded by 1; vectors whose
    # final move touches the endpoint push it above 1 on the whole
    # admissible region (see gamma_n docs)
    assert gamma_n((1, 1, 2, 0), P_REF) == pytest.approx(1.0244671924, rel=1e-8)
    assert gamma_n((2, 0, 1), FractionalParams(0.56, 0.25)) > 1.09


def test_interior_moves_are_monotone():
    # the decrease claim does hold for moves at interior touch points
    # 2 <= i <= n-2
    for p in (P_REF, FractionalParams(0.85, 0.2)):
        for n in (4, 6, 8):
            for a in enumerate_exponent_vectors(n):
                for i in diagonal_touch_points(a):
                    if i < 2 or i > n - 2:
                        continue
                    b = move_down(a, i)
                    assert gamma_n(b, p) <= gamma_n(a, p) + 1e-12


def test_move_ratio_arguments_are_ordered():
    # the two shifted theta arguments entering consecutive factors of the
    # gamma product are ordered, z1 <= z2, at every interior touch point
    for p in (P_REF, FractionalParams(0.85, 0.2)):
        c = (1.0 - 2.0 * p.H) / (4.0 * p.H0)
        for n in (5, 6, 8):
            for a in enumerate_exponent_vectors(n):
                at = tuple(a)
                for i in diagonal_touch_points(a):
                    if i < 2 or i > n - 2:
                        continue
                    z1 = theta(i, a, p) + c * (at[i - 1] + at[i] - 2.0)
                    z2 = theta(i + 1, a, p) + c * (at[i] + at[i + 1] - 2.0)
                    assert z2 >= z1 - 1e-12


def test_term_bound_modes_and_time_exponent():
    tb = term_bound(4, 2.0, P_REF)
    assert tb.mode == "exact-constants"
    assert tb.time_exponent == pytest.approx(4 * P_REF.time_growth_exponent)
    assert tb.gamma_n > 1.0  # max over the family at these params
    tba = term_bound(4, 2.0, P_REF, mode="asymptotic", C=4.0)
    assert tba.log_bound >= tb.log_bound  # C = 4 dominates here
    # monotone in t (positive time exponent)
    for n in (1, 3, 6):
        lo = term_bound(n, 0.5, P_REF).log_bound
        hi = term_bound(n, 1.5, P_REF).log_bound
        assert hi > lo


def test_term_bound_time_power_is_uniform_over_family():
    # every exponent vector contributes the same total power of t, so the
    # whole bound scales as t^{n (2 H0 + H - 1)}
    for n in (2, 3, 5):
        b1 = term_bound(n, 1.0, P_REF).log_bound
        b2 = term_bound(n, 3.0, P_REF).log_bound
        assert b2 - b1 == pytest.approx(
            n * P_REF.time_growth_exponent * math.log(3.0), rel=1e-10
        )


def test_term_bound_b_homogeneity():
    pb = FractionalParams(0.75, 0.3, 2.0)
    for n in (1, 2, 4):
        base = term_bound(n, 1.0, P_REF).log_bound
        scaled = term_bound(n, 1.0, pb).log_bound
        assert scaled - base == pytest.approx(n * math.log(2.0), rel=1e-12)


def test_term_bound_size_cap():
    with pytest.raises(SizeError):
        term_bound(31, 1.0, P_REF)


def test_log_term_sum_small_n_by_hand():
    # n = 1: single vector (1,), the sum is one explicit term
    log_sum, max_g = _log_term_sum_exact(1, 1.0, P_REF)
    assert max_g == pytest.approx(1.0)
    assert math.isfinite(log_sum)


def test_stirling_bound_search():
    a = P_REF.time_growth_exponent / (2.0 * P_REF.H0)
    thr = stirling_lb_check(a, 0.0, 0.3, range(1, 501))
    assert 1 <= thr <= 500
    with pytest.raises(EstimationError):
        stirling_lb_check(a, 0.0, 50.0, range(1, 501))


def test_series_direct_vs_laplace_agree_at_crossover():
    # moderately sized peaks can be summed directly; the saddle-point
    # branch must agree there to a fraction of a percent
    p = P_REF
    for pp, t in [(2.0, 30.0), (4.0, 20.0)]:
        direct, peak = log_chaos_series(pp, t, p, C=4.0)
        lap, _ = log_chaos_series(pp, t, p, C=4.0, max_terms=1)
        assert peak > 100
        assert lap == pytest.approx(direct, rel=2e-3)


def test_series_monotone_in_p_and_t():
    vals_t = [log_chaos_series(2.0, t, P_REF, C=4.0)[0] for t in (1.0, 2.0, 4.0, 8.0)]
    assert all(b > a for a, b in zip(vals_t, vals_t[1:]))
    vals_p = [log_chaos_series(p, 2.0, P_REF, C=4.0)[0] for p in (2.0, 4.0, 8.0)]
    assert all(b > a for a, b in zip(vals_p, vals_p[1:]))


def test_fitted_time_exponent():
    for p in (P_REF, FractionalParams(0.85, 0.2)):
        target = p.time_growth_exponent / p.H
        assert abs(fit_time_exponent(p) - target) / target <= 0.05


def test_fitted_p_exponent():
    for p in (P_REF, FractionalParams(0.85, 0.2)):
        target = (p.H + 1.0) / p.H
        assert abs(fit_p_exponent(p) - target) / target <= 0.10


def test_envelope_dominates_series_on_grid():
    c1, c2 = fit_envelope_constants(P_REF, C=4.0)
    assert c1 > 0 and c2 > 0
    tight = math.inf
    for p in (2.0, 4.0, 8.0, 16.0, 32.0):
        for t in np.logspace(0.0, 2.0, 9):
            ls, _ = log_chaos_series(p, float(t), P_REF, C=4.0)
            env = math.log(c1) + c2 * _envelope_exponent(p, float(t), P_REF) / p
            assert env >= ls - 1e-8 * (1.0 + abs(ls))
            tight = min(tight, (env - ls) / (1.0 + abs(ls)))
    assert tight <= 1e-6  # the witness pair is tight somewhere


def test_moment_bound_composition():
    res = moment_bound(4.0, 2.0, 0.0, P_REF, LebesgueConstant(1.0), C=4.0)
    assert res.log_envelope_value >= res.log_series_value
    assert res.truncation_index > 0
    assert res.series_value == math.inf or res.series_value > 0
