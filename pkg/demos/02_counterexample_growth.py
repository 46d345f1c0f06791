"""Why thin annuli fail the weak inequality: the counterexample grows.

f(x) = -1 / (|x|^(d-1) ln|x|) on |x| < 1/2 is in L^p for p = d/(d-1) but
its averages over the annulus centered at x with outer radius |x| (which
grazes the singular origin) grow like ln|ln e| as the thickness e shrinks.
"""

import math

import numpy as np

from annuli import Constant, Counterexample, MonteCarlo, critical_norm, growth_regression, proof_radius_average

for d in (2, 3):
    closed, quad = critical_norm(d)
    print(f"d={d}: int f^(d/(d-1)) = {closed:.6f} (quadrature {quad:.6f})")

f = Counterexample(2)
x = np.array([1.5, 0.0])
print("\n delta      ln|ln delta|   M f(x) * |x|")
for delta in (1e-2, 1e-4, 1e-8, 1e-12, 1e-16):
    val = proof_radius_average(f, x, Constant(delta)).value
    print(f"{delta:8.0e}   {math.log(abs(math.log(delta))):8.4f}      {val * 1.5:.6f}")

# the deterministic shell rule agrees with plain Monte Carlo where MC can resolve the annulus
shell = proof_radius_average(f, x, Constant(0.01))
mc = proof_radius_average(f, x, Constant(0.01), MonteCarlo(10**6, 1))
print(f"\ne = 0.01: shell rule {shell.value:.6f} +- {shell.error:.0e}, Monte Carlo {mc.value:.4f} +- {mc.error:.4f}")

for d in (2, 3):
    fit = growth_regression(d)
    print(f"d={d}: slope {fit.slope:.4f} per unit of ln|ln delta|, R^2 = {fit.r2:.4f}")
