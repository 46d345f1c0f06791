"""Annulus averages along a translation flow on the torus.

T_t w = w + A t (mod 1). A trigonometric polynomial averaged over an annulus
of times is multiplied, frequency by frequency, by the annulus kernel at
A^T k, so the L^2 distance to the mean is explicit.
"""

import numpy as np

from annuli import Constant, MonteCarlo, PowerLaw, TorusSystem, TrigPoly, flow_average, mean_l2_error, spectral_average

flow = TorusSystem(np.array([[1.0, 0.3], [-0.2, 0.8]]))
phi = TrigPoly({(0, 0): 1.0, (1, 0): 0.5, (-1, 0): 0.5, (1, 2): 0.3j})
omega = np.array([0.2, 0.6])

for r in (0.5, 2.0, 8.0):
    est = flow_average(flow, phi, omega, r, PowerLaw(1.0, 0.5), MonteCarlo(400_000, 1))
    exact = spectral_average(flow, phi, omega, r, PowerLaw(1.0, 0.5))
    print(f"r={r:4}: flow {complex(est.value):.4f} +- {est.error:.1e}, spectral {exact:.4f}")

print("\nL2 distance to the mean, e(r) = sqrt(r):")
for r in (10.0, 100.0, 1000.0, 10000.0):
    print(f"  r={r:7.0f}: {mean_l2_error(flow, phi, r, PowerLaw(1.0, 0.5)):.2e}")

one_d = TorusSystem(np.array([[0.25]]))
wave = TrigPoly.wave((1,))
radii = np.linspace(1000, 1008, 401)
print("\nd=1, frequency 1/4 along the flow, r in [1000, 1008]:")
print(f"  constant thickness 1: max error {max(mean_l2_error(one_d, wave, r, Constant(1.0)) for r in radii):.3f}")
print(f"  thickness sqrt(r):    max error {max(mean_l2_error(one_d, wave, r, PowerLaw(1.0, 0.5)) for r in radii):.3f}")
