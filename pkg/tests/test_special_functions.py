import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pam_moments.errors import DomainError
from pam_moments.special_functions import (
    digamma,
    digamma_series,
    euler_gamma,
    gamma_ratio,
    log_factorial,
    log_gamma,
    log_gamma_ratio,
    stirling_log_gamma,
)

mpmath.mp.dps = 40


def test_log_gamma_against_mpmath():
    for x in np.geomspace(1e-3, 1e5, 60):
        ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
        assert log_gamma(float(x)) == pytest.approx(ref, rel=1e-13, abs=1e-13)


def test_digamma_against_mpmath():
    for x in np.geomspace(1e-2, 1e4, 50):
        ref = float(mpmath.digamma(mpmath.mpf(float(x))))
        assert digamma(float(x)) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_digamma_known_values():
    g = euler_gamma()
    assert digamma(1.0) == pytest.approx(-g, abs=1e-14)
    assert digamma(2.0) == pytest.approx(1.0 - g, abs=1e-14)


def test_digamma_series_oracle_agrees():
    for x in (0.3, 1.0, 2.5, 5.5, 9.9):
        assert digamma_series(x) == pytest.approx(digamma(x), abs=5e-11)


def test_stirling_oracle_agrees():
    for x in (10.0, 25.0, 123.4, 1e4):
        assert stirling_log_gamma(x) == pytest.approx(log_gamma(x), rel=1e-13)


def test_log_gamma_recurrence():
    # the subtraction cancels ~eps * log_gamma(x+1) absolutely, which
    # dominates the budget once x is large
    eps = np.finfo(float).eps
    for x in np.geomspace(0.05, 1e5, 80):
        lhs = log_gamma(x + 1.0) - log_gamma(x)
        tol = 1e-12 * (1.0 + abs(math.log(x))) + 4.0 * eps * abs(log_gamma(x + 1.0))
        assert abs(lhs - math.log(x)) <= tol


def test_gamma_ratio_identity_cases():
    assert gamma_ratio(3.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert gamma_ratio(1.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert gamma_ratio(0.5, 0.5) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)


def test_gamma_ratio_monotone_in_z():
    z = np.linspace(0.1, 50.0, 400)
    for a in (0.05, 0.5, 2.0):
        vals = np.array([gamma_ratio(zi, a) for zi in z])
        assert np.all(np.diff(vals) >= -1e-12)


def test_digamma_nondecreasing():
    x = np.geomspace(0.05, 100.0, 200)
    vals = np.array([digamma(xi) for xi in x])
    assert np.all(np.diff(vals) > 0)


def test_log_gamma_ratio_no_overflow_huge_arguments():
    val = log_gamma_ratio(9.9e5, 100.0)
    assert math.isfinite(val)
    assert math.isfinite(gamma_ratio(5e5, 2.0))


def test_log_factorial_matches_log_gamma():
    for n in (0, 1, 2, 10, 170, 5000):
        assert log_factorial(n) == pytest.approx(log_gamma(n + 1.0), rel=1e-14)


def test_domain_errors():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-1.5)
    with pytest.raises(DomainError):
        digamma(-2.0)
    with pytest.raises(DomainError):
        gamma_ratio(1.0, -0.5)


def test_array_broadcasting():
    x = np.array([0.5, 1.0, 3.0])
    assert np.allclose(log_gamma(x), [log_gamma(v) for v in x])
    assert np.allclose(digamma(x), [digamma(v) for v in x])


@settings(max_examples=60, deadline=None)
@given(
    z=st.floats(0.05, 100.0, allow_nan=False),
    a=st.floats(0.0, 5.0, allow_nan=False),
)
def test_gamma_ratio_log_consistency(z, a):
    assert gamma_ratio(z, a) == pytest.approx(
        math.exp(log_gamma_ratio(z, a)), rel=1e-12
    )


@settings(max_examples=60, deadline=None)
@given(z=st.floats(0.1, 50.0), a=st.floats(0.01, 3.0))
def test_gamma_ratio_functional_equation(z, a):
    # Gamma(z+a+1)/Gamma(z) = (z+a) * Gamma(z+a)/Gamma(z)
    lhs = gamma_ratio(z, a + 1.0)
    rhs = (z + a) * gamma_ratio(z, a)
    assert lhs == pytest.approx(rhs, rel=1e-11)
