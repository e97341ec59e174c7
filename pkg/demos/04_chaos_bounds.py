"""The bound chain: gamma products, per-order bounds, moment growth.

For noise parameters (H0, H) in the admissible region, each chaos order n
contributes at most b^n (n!)^(2H0-1) [sum over A_n ...]^(2H0), and the
resulting moment series grows like exp(C p^((H+1)/H) t^((2H0+H-1)/H)).
This script shows the pieces, including the one place where the naive
expectation fails: the gamma product is NOT globally maximized at the
all-ones vector -- endpoint-touching vectors push it above 1.
"""

import numpy as np

from pam_moments import (
    FractionalParams,
    fit_envelope_constants,
    fit_p_exponent,
    fit_time_exponent,
    gamma_n,
    gamma_n_matrix,
    enumerate_exponent_vectors,
    term_bound,
)

params = FractionalParams(H0=0.75, H=0.3)
print(f"params: H0 = {params.H0}, H = {params.H}")
print(f"time growth exponent 2 H0 + H - 1 = {params.time_growth_exponent}")

print("\ngamma_n over A_4 (note the values above 1):")
for a, g in zip(enumerate_exponent_vectors(4), gamma_n_matrix(4, params)):
    marker = "  <-- exceeds 1" if g > 1 + 1e-12 else ""
    print(f"  a = {''.join(map(str, a))}: gamma = {g:.6f}{marker}")
print(f"  all-ones is exactly 1: gamma(1,1,1,1) = {gamma_n((1,) * 4, params):.12f}")

print("\nPer-order bounds on E[J_n^2]/J0^2 at t = 1 (exact constants, b = 1):")
for n in (1, 2, 4, 8, 16):
    tb = term_bound(n, 1.0, params)
    print(
        f"  n = {n:2d}: log bound = {tb.log_bound:10.3f}, "
        f"t-exponent = {tb.time_exponent:5.2f}, max gamma = {tb.gamma_n:.4f}"
    )

print("\nFitted growth exponents of the moment series (C = 4):")
t_target = params.time_growth_exponent / params.H
p_target = (params.H + 1.0) / params.H
print(f"  t-exponent: fit {fit_time_exponent(params):.4f} vs (2H0+H-1)/H = {t_target:.4f}")
print(f"  p-exponent: fit {fit_p_exponent(params):.4f} vs (H+1)/H     = {p_target:.4f}")

c1, c2 = fit_envelope_constants(params, C=4.0)
print(f"\nEnvelope witnesses: C1 = {c1:.6g}, C2 = {c2:.6g}")
print("  (E|u|^p <= C1^p exp(C2 p^((H+1)/H) t^((2H0+H-1)/H)) on the fit grid)")
