"""Fourier transforms of uniform probability measures on annuli.

For d >= 2 the transform of the uniform law on ``ann(r, e)`` is radial,

    kernel_r(s) = int_{r-e}^{r} rho^(d-1) sphere_fourier(rho s) d rho  /  int_{r-e}^{r} rho^(d-1) d rho,

where ``sphere_fourier`` is the transform of the uniform probability on the unit
sphere. The normalization fixes ``kernel_r(0) = 1``. In d = 1 the annulus is the
pair of intervals ``[-r, -r+e] u [r-e, r]`` and

    kernel_r(z) = (sin(2 pi z r) - sin(2 pi z (r - e))) / (2 pi z e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .geometry import check_dim, check_shell, shell_power_difference, thickness
from .parallel import pmap
from .specfun import sphere_fourier

REL_TOL = 1e-8
_NODES = 10
_MAX_DOUBLINGS = 6


@dataclass(frozen=True)
class KernelQuery:
    d: int
    r: float
    e: float
    s: float

    def __post_init__(self):
        check_dim(self.d)
        check_shell(self.r, self.e)
        if self.d >= 2 and self.s < 0:
            raise DomainError("frequency magnitude must be >= 0 for d >= 2")


def kernel_1d(r, e, z):
    """Transform of the uniform law on ``[-r, -r+e] u [r-e, r]`` at frequency ``z``.

    Real and even in ``z``; broadcasts over ``r``, ``e`` and ``z``.
    """
    r, e, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, e, z)))
    if not np.all((e > 0) & (e <= r)):
        raise DomainError("need 0 < e <= r")
    w = 2.0 * math.pi * z
    # sin(w r) - sin(w (r - e)) = 2 cos(w (r - e/2)) sin(w e / 2)
    half = 0.5 * w * e
    safe = np.where(half == 0, 1.0, half)
    sinc = np.where(half == 0, 1.0, np.sin(safe) / safe)
    out = np.cos(w * (r - 0.5 * e)) * sinc
    return float(out) if out.ndim == 0 else out


def _radial_quadrature(d, r, e, s, panels):
    x, w = leggauss(_NODES)
    edges = r - e + e * np.linspace(0.0, 1.0, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    rho = (a + 0.5 * (x + 1.0) * (b - a)).ravel()
    wt = (0.5 * (b - a) * w).ravel()
    return float(np.dot(wt, rho ** (d - 1) * sphere_fourier(d, rho * s)))


def annulus_kernel(d, r, e, s, with_error=False):
    """Fourier transform of the uniform probability on the annulus ``ann(r, e)``.

    Parameters
    ----------
    d : int
        Dimension, 1 <= d <= 10.
    r, e : float
        Outer radius and thickness.
    s : float
        Frequency magnitude for d >= 2; signed frequency ``z`` for d = 1.
    with_error : bool
        Also return the quadrature error estimate (last panel doubling).

    Notes
    -----
    Gauss-Legendre panels are no wider than a quarter period ``1/(4 s)`` and
    are doubled until successive estimates agree to ``REL_TOL``.
    """
    KernelQuery(d, r, e, s)
    if d == 1:
        val = kernel_1d(r, e, s)
        return (val, 0.0) if with_error else val
    if s == 0:
        return (1.0, 0.0) if with_error else 1.0
    mass = shell_power_difference(d, r, e) / d
    panels = max(1, math.ceil(4.0 * e * s))
    prev = _radial_quadrature(d, r, e, s, panels) / mass
    err = math.inf
    for _ in range(_MAX_DOUBLINGS):
        panels *= 2
        cur = _radial_quadrature(d, r, e, s, panels) / mass
        err = abs(cur - prev)
        prev = cur
        if err <= REL_TOL * max(abs(cur), 1e-6):
            break
    return (prev, err) if with_error else prev


def kernel_modulus_phase(r, e, z):
    """Modulus and phase (0 or pi) of the d = 1 kernel."""
    val = kernel_1d(r, e, z)
    return abs(val), (0.0 if val >= 0 else math.pi)


def ball_kernel_3d(s, r=1.0):
    """Closed form ``3 (sin u - u cos u) / u^3`` with ``u = 2 pi r s``."""
    u = 2.0 * math.pi * r * s
    if u == 0:
        return 1.0
    return 3.0 * (math.sin(u) - u * math.cos(u)) / u**3


def decay_scan(d, fn, s, r_grid):
    """Kernel values along a radius grid with thickness ``e = fn(r)``.

    Returns a list of ``(r, e, s, value)`` tuples.
    """
    if not s > 0:
        raise DomainError(f"decay_scan needs s > 0, got {s}")
    radii = np.asarray(r_grid, dtype=float)
    if radii.ndim != 1 or radii.size == 0:
        raise DomainError("radius grid must be a nonempty 1-d list")
    if np.any(np.diff(radii) <= 0):
        raise DomainError("radius grid must be increasing")

    def one(r):
        e, _ = thickness(fn, r)
        return (float(r), float(e), float(s), annulus_kernel(d, r, e, s))

    return pmap(one, radii.tolist())


SCAN_COLUMNS = ("r", "e", "s", "value")
