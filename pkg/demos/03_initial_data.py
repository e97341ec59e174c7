"""Measure-valued initial data and the deterministic part J0.

The solution theory only needs the initial measure through two hooks: the
heat flow J0(t, x) = (G(t) * mu0)(x) and the Gaussian integrability
condition int exp(-a x^2) mu0(dx) < infinity.  Both are closed-form for
every built-in measure.
"""

import numpy as np

from pam_moments import (
    DiracAt,
    GaussianDensity,
    LebesgueConstant,
    PolynomialDensity,
    check_cond_mu0,
    heat_kernel,
    j0,
)

t = 1.0
xs = np.linspace(-2.0, 2.0, 5)

measures = {
    "Dirac at 0": DiracAt(0.0),
    "2 * Lebesgue": LebesgueConstant(2.0),
    "N(0, 1) density": GaussianDensity(0.0, 1.0),
    "x^2 density": PolynomialDensity(),
}

for name, m in measures.items():
    vals = ", ".join(f"{j0(t, float(x), m):.4f}" for x in xs)
    print(f"{name:16s}: J0(1, x) on x in [-2, 2]: {vals}")

print("\nThe point mass spreads like the heat kernel: sqrt(t) J0(t, 0) is flat")
m = DiracAt(0.0)
for tt in (0.01, 0.1, 1.0, 10.0):
    print(f"  t = {tt:5.2f}: sqrt(t) J0 = {np.sqrt(tt) * m.j0(tt, 0.0):.12f}")

print("\nGrowing tails are fine as long as the Gaussian integral converges:")
rep = check_cond_mu0(PolynomialDensity(), a_grid=(0.1, 1.0, 10.0))
print(f"  x^2 dx: ok = {rep.ok}, integrals = {[f'{v:.4f}' for v in rep.values]}")
print(f"  (closed form sqrt(pi)/2 a^(-3/2) at a = 1: {np.sqrt(np.pi) / 2:.4f})")
print(f"\nheat_kernel(1, 0) = {heat_kernel(1.0, 0.0):.6f} = 1/sqrt(2 pi)")
