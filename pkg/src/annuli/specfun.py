"""Bessel functions J_nu for integer and half-integer orders, and the Fourier
transform of the uniform probability measure on the unit sphere.

Only the orders ``nu = (d - 2) / 2`` with ``1 <= d <= 10`` are needed, but any
order that is a nonnegative multiple of 1/2 is accepted.
"""

import math

import numpy as np

from .errors import DomainError

SERIES_CUTOFF = 12.0
_SERIES_TERMS = 64
_ASYMPTOTIC_TERMS = 40


def _check_order(nu):
    twice = 2.0 * nu
    if nu < 0 or twice != round(twice):
        raise DomainError(f"Bessel order must be a nonnegative multiple of 1/2, got {nu}")
    return int(round(twice))


def _series(nu, x):
    # sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)), summed by term ratio
    half = 0.5 * x
    q = -half * half
    term = np.exp(nu * np.log(np.where(half > 0, half, 1.0)) - math.lgamma(nu + 1.0))
    if nu > 0:
        term = np.where(half > 0, term, 0.0)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + nu))
        total = total + term
    return total


def _hankel(nu, x):
    # J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi
    mu = 4.0 * nu * nu
    inv8x = 1.0 / (8.0 * x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    live = np.ones(x.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) * inv8x / k
        size = np.abs(term)
        # stop each element at its smallest term (optimal truncation)
        live &= size < prev
        prev = np.where(live, size, prev)
        contrib = np.where(live, term, 0.0)
        if k % 2:
            q = q + (contrib if (k // 2) % 2 == 0 else -contrib)
        else:
            p = p + (contrib if (k // 2) % 2 == 0 else -contrib)
        live &= size > 1e-17
        if not live.any():
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _half_integer(twice, x):
    # closed forms for J_{-1/2}, J_{1/2}, then upward recurrence (stable for x > nu)
    amp = np.sqrt(2.0 / (math.pi * x))
    j_prev = amp * np.cos(x)
    j = amp * np.sin(x)
    nu = 0.5
    while 2 * nu < twice:
        j_prev, j = j, (2.0 * nu / x) * j - j_prev
        nu += 1.0
    return j


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for x >= 0.

    Power series below ``x = 12``; above it, closed trigonometric forms with
    upward recurrence for half-integer orders and the Hankel asymptotic
    expansion for integer orders.

    Parameters
    ----------
    nu : float
        Order, a nonnegative multiple of 1/2.
    x : float or array_like
        Argument, ``x >= 0``.

    Examples
    --------
    >>> float(bessel_j(0, 0.0))
    1.0
    >>> abs(float(bessel_j(0.5, np.pi))) < 1e-15
    True
    """
    twice = _check_order(nu)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr >= 0)):
        raise DomainError("bessel_j is defined for x >= 0")
    flat = np.atleast_1d(x_arr).ravel()
    out = np.empty_like(flat)
    small = flat <= SERIES_CUTOFF
    if small.any():
        out[small] = _series(0.5 * twice, flat[small])
    big = ~small
    if big.any():
        if twice % 2:
            out[big] = _half_integer(twice, flat[big])
        else:
            out[big] = _hankel(0.5 * twice, flat[big])
    out = out.reshape(x_arr.shape)
    return float(out) if x_arr.ndim == 0 else out


def sphere_fourier(d, s):
    """Fourier transform of the uniform probability on the unit sphere of R^d.

    ``Gamma(d/2) J_nu(2 pi s) / (pi s)**nu`` with ``nu = (d - 2)/2``,
    equal to 1 at ``s = 0``. In d = 3 this is exactly ``sin(2 pi s)/(2 pi s)``.
    ``s`` is the frequency magnitude and may be an array.
    """
    if int(d) != d or d < 2 or d > 10:
        raise DomainError(f"sphere_fourier needs 2 <= d <= 10, got d={d}")
    s_arr = np.asarray(s, dtype=float)
    if np.any(~(s_arr >= 0)):
        raise DomainError("sphere_fourier needs s >= 0")
    u = 2.0 * math.pi * s_arr
    if d == 3:
        safe = np.where(u == 0, 1.0, u)
        out = np.where(u == 0, 1.0, np.sin(safe) / safe)
    else:
        nu = 0.5 * (d - 2)
        flat = np.atleast_1d(u).ravel()
        res = np.empty_like(flat)
        small = flat <= SERIES_CUTOFF
        if small.any():
            # Gamma(nu+1) sum_k (-1)^k (u/2)^(2k) / (k! Gamma(k+nu+1))
            q = -0.25 * flat[small] ** 2
            term = np.ones_like(q)
            total = term.copy()
            for k in range(1, _SERIES_TERMS):
                term = term * q / (k * (k + nu))
                total = total + term
            res[small] = total
        big = ~small
        if big.any():
            ub = flat[big]
            res[big] = math.gamma(nu + 1.0) * bessel_j(nu, ub) / (0.5 * ub) ** nu
        out = res.reshape(u.shape)
    return float(out) if s_arr.ndim == 0 else out
