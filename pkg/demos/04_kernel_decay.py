"""Fourier kernels of annuli and their decay.

The mean ergodic theorem for annulus averages comes down to the Fourier
transform of the uniform law on the annulus tending to zero at every
nonzero frequency. In d >= 2 it does as soon as e(r) is not too small; in
d = 1 it does only if e(r) -> infinity.
"""

import numpy as np

from annuli import PowerLaw, annulus_kernel, decay_scan, kernel_1d
from annuli.fourier import ball_kernel_3d

print(f"unit ball d=3, s=1: {annulus_kernel(3, 1.0, 1.0, 1.0):.12f} (closed form {ball_kernel_3d(1.0):.12f})")
print(f"thin circle r=5:     {annulus_kernel(2, 5.0, 5e-9, 1.0):.10f}")

for d in (2, 3):
    for lo in (10, 100, 1000, 9000):
        rows = decay_scan(d, PowerLaw(1.0, 0.5), 1.0, np.linspace(lo, lo + 10, 81))
        print(f"d={d}, r in [{lo}, {lo + 10}]: max |kernel| = {max(abs(v) for *_, v in rows):.2e}")

r = np.linspace(1000, 1008, 8001)
print(f"\nd=1, z=1/4: constant e=1 keeps max |kernel| = {np.abs(kernel_1d(r, 1.0, 0.25)).max():.3f}")
print(f"            e = sqrt(r) gives            {np.abs(kernel_1d(r, np.sqrt(r), 0.25)).max():.3f}")
print(f"            integer z=1 with e=1 gives   {np.abs(kernel_1d(r, 1.0, 1.0)).max():.1e} (whole periods)")
