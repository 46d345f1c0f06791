"""Annuli, balls and spheres of R^d in the Euclidean and max norms.

An annulus of outer radius ``r`` and thickness ``e`` is the set of points
whose distance to the center lies in ``[r - e, r]``. ``e == r`` gives the
ball. Volumes are computed in factored form, ``e * sum(r**(d-1-k) (r-e)**k)``,
so that shells as thin as ``1e-16 * r`` keep full relative precision.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import betainc, gammaln

from .errors import DomainError

MAX_DIM = 10
NORMS = ("euclidean", "max")


def check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {d}")
    if d > MAX_DIM:
        raise DomainError(f"dimension must be <= {MAX_DIM}, got {d}")
    return int(d)


def check_norm(norm):
    if norm not in NORMS:
        raise DomainError(f"norm must be one of {NORMS}, got {norm!r}")
    return norm


def check_shell(r, e):
    if not r > 0:
        raise DomainError(f"radius must be > 0, got r={r}")
    if not e > 0:
        raise DomainError(f"thickness must be > 0, got e={e}")
    if e > r:
        raise DomainError(f"thickness must not exceed the radius, got e={e} > r={r}")


def unit_ball_volume(d):
    """Volume of the Euclidean unit ball, pi^(d/2) / Gamma(d/2 + 1).

    Built by ``v_d = 2 pi v_(d-2) / d`` from ``v_0 = 1, v_1 = 2``, which is
    exact for d = 1, 2 and within a few ulps beyond.
    """
    v = 1.0 if d % 2 == 0 else 2.0
    for k in range(2 + d % 2, d + 1, 2):
        v *= 2.0 * math.pi / k
    return v


def unit_sphere_area(d):
    """Surface area of the unit sphere S^(d-1), 2 pi^(d/2) / Gamma(d/2), i.e. ``d v_d``."""
    return d * unit_ball_volume(d)


def shell_power_difference(d, r, e):
    """``r**d - (r - e)**d`` without cancellation."""
    inner = r - e
    return e * sum(r ** (d - 1 - k) * inner**k for k in range(d))


def annulus_volume(d, r, e, norm="euclidean"):
    """Lebesgue measure of the annulus ``{t : r - e <= |t| <= r}``.

    Parameters
    ----------
    d : int
        Dimension, 1 <= d <= 10.
    r, e : float
        Outer radius and thickness, ``0 < e <= r``.
    norm : {"euclidean", "max"}
        ``"max"`` measures the cubic annulus built on the sup norm.

    Examples
    --------
    >>> round(annulus_volume(2, 2.0, 1.0), 6)
    9.424778
    >>> annulus_volume(3, 1.0, 1.0, "max")
    8.0
    """
    d = check_dim(d)
    check_norm(norm)
    check_shell(r, e)
    factor = unit_ball_volume(d) if norm == "euclidean" else 2.0**d
    return factor * shell_power_difference(d, r, e)


def ball_volume(d, r, norm="euclidean"):
    return annulus_volume(d, r, r, norm)


def sphere_area(d, rho):
    """Surface measure of the Euclidean sphere of radius ``rho`` in R^d.

    In d = 1 the sphere is the two-point set ``{-rho, rho}`` with counting
    measure, so the area is 2.
    """
    d = check_dim(d)
    if not rho > 0:
        raise DomainError(f"sphere radius must be > 0, got {rho}")
    return unit_sphere_area(d) * rho ** (d - 1)


def vector_norm(t, norm="euclidean"):
    t = np.asarray(t, dtype=float)
    if norm == "euclidean":
        return np.sqrt(np.sum(t * t, axis=-1))
    return np.max(np.abs(t), axis=-1)


@dataclass(frozen=True)
class AnnulusSpec:
    """Annulus ``x + ann(r, e)`` in R^d for the Euclidean or max norm."""

    center: tuple
    r: float
    e: float
    norm: str = "euclidean"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        check_dim(len(self.center))
        check_norm(self.norm)
        check_shell(self.r, self.e)

    @property
    def dim(self):
        return len(self.center)

    @property
    def volume(self):
        return annulus_volume(self.dim, self.r, self.e, self.norm)

    @property
    def is_ball(self):
        return self.e == self.r

    def contains(self, t):
        return contains(self, t)


def contains(spec, t):
    """Membership test ``r - e <= |t - x| <= r`` in the annulus's norm.

    Accepts a single point of shape ``(d,)`` or a batch of shape ``(n, d)``.
    """
    t = np.asarray(t, dtype=float)
    if t.shape[-1] != spec.dim:
        raise DomainError(f"point has dimension {t.shape[-1]}, annulus has {spec.dim}")
    dist = vector_norm(t - np.asarray(spec.center), spec.norm)
    inside = (dist >= spec.r - spec.e) & (dist <= spec.r)
    return bool(inside) if inside.ndim == 0 else inside


def band_fraction(lower, width, d):
    """Normalized surface measure of ``{theta in S^(d-1) : lower <= theta_1 <= lower + width}``.

    The band is described by its lower edge and its width rather than by two
    edges, so that bands of width ~1e-16 are measured without cancellation.
    Edges outside ``[-1, 1]`` are clipped. Vectorized over ``lower``/``width``.
    """
    lower = np.asarray(lower, dtype=float)
    width = np.asarray(width, dtype=float)
    upper = lower + width
    a = np.clip(lower, -1.0, 1.0)
    b = np.clip(upper, -1.0, 1.0)
    w = np.where((upper <= 1.0) & (lower >= -1.0), width, np.maximum(b - a, 0.0))
    if d == 1:
        return 0.5 * ((lower <= -1.0) & (upper >= -1.0)) + 0.5 * ((lower <= 1.0) & (upper >= 1.0))
    if d == 3:
        return 0.5 * w
    if d == 2:
        # arcsin(b) - arcsin(a) as an atan2 whose sine is formed without cancellation
        sa = np.sqrt(1.0 - a * a)
        sb = np.sqrt(1.0 - b * b)
        den = b * sa + a * sb
        safe = np.where(den == 0.0, 1.0, den)
        sine = np.where(a * b >= 0.0, w * (a + b) / safe, b * sa - a * sb)
        return np.arctan2(sine, a * b + sa * sb) / np.pi
    # d >= 4: density (1 - u^2)^((d-3)/2) / B((d-1)/2, 1/2)
    k = 0.5 * (d - 1)
    log_beta = gammaln(k) + gammaln(0.5) - gammaln(k + 0.5)
    thin = w < 1e-4
    m = 0.5 * (a + b)

    def dens(u):
        return np.power(np.maximum(1.0 - u * u, 0.0), 0.5 * (d - 3))

    simpson = w * (dens(a) + 4.0 * dens(m) + dens(b)) / 6.0 * math.exp(-log_beta)
    cdf = betainc(k, k, 0.5 * (1.0 + b)) - betainc(k, k, 0.5 * (1.0 + a))
    return np.where(thin, simpson, cdf)


# -- thickness functions ----------------------------------------------------


class ThicknessValue(NamedTuple):
    e: float
    clamped: bool


class ThicknessFunction:
    """Rule ``r -> e(r)``; evaluation clamps to ``e <= r`` and reports it."""

    def rule(self, r):
        raise NotImplementedError

    def __call__(self, r):
        return thickness(self, r)

    def spec(self):
        """Mini-grammar string that parses back to this function."""
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(ThicknessFunction):
    def rule(self, r):
        return np.asarray(r, dtype=float)

    def spec(self):
        return "ball"


@dataclass(frozen=True)
class Proportional(ThicknessFunction):
    gamma: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise DomainError(f"proportional thickness needs 0 < gamma <= 1, got {self.gamma}")

    def rule(self, r):
        return self.gamma * np.asarray(r, dtype=float)

    def spec(self):
        return f"prop:{self.gamma!r}"


@dataclass(frozen=True)
class Constant(ThicknessFunction):
    e0: float

    def __post_init__(self):
        if not self.e0 > 0:
            raise DomainError(f"constant thickness must be > 0, got {self.e0}")

    def rule(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.e0)

    def spec(self):
        return f"const:{self.e0!r}"


@dataclass(frozen=True)
class PowerLaw(ThicknessFunction):
    """``e(r) = c * r**alpha`` with ``0 <= alpha < 1``."""

    c: float
    alpha: float

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"power-law coefficient must be > 0, got {self.c}")
        if not 0 <= self.alpha < 1:
            raise DomainError(f"power-law exponent must lie in [0, 1), got {self.alpha}")

    def rule(self, r):
        return self.c * np.power(np.asarray(r, dtype=float), self.alpha)

    def spec(self):
        return f"pow:{self.c!r},{self.alpha!r}"


@dataclass(frozen=True)
class Table(ThicknessFunction):
    """Tabulated thickness, interpolated linearly in (log r, log e).

    Outside the tabulated range the nearest node's value is used.
    """

    radii: tuple
    values: tuple
    source: str = field(default="", compare=False)

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        e = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != e.shape or r.size == 0:
            raise DomainError("thickness table needs matching, nonempty r and e columns")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise DomainError("thickness table radii must be positive and strictly increasing")
        if np.any(e <= 0):
            raise DomainError("thickness table values must be > 0")
        object.__setattr__(self, "radii", tuple(r.tolist()))
        object.__setattr__(self, "values", tuple(e.tolist()))

    def rule(self, r):
        lr = np.log(np.asarray(r, dtype=float))
        return np.exp(np.interp(lr, np.log(self.radii), np.log(self.values)))

    def spec(self):
        return f"table:{self.source}" if self.source else "table:<inline>"

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or not {"r", "e"} <= set(rows[0]):
            raise DomainError(f"{path}: thickness table must have header 'r,e'")
        return cls(
            tuple(float(row["r"]) for row in rows),
            tuple(float(row["e"]) for row in rows),
            source=str(path),
        )


def thickness(fn, r):
    """Evaluate a thickness function, clamping to ``e <= r``.

    Returns ``(e, clamped)``; both are arrays when ``r`` is an array.

    >>> thickness(Constant(3.0), 2.0)
    ThicknessValue(e=2.0, clamped=True)
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise DomainError(f"thickness is defined for r > 0, got {r}")
    raw = np.asarray(fn.rule(r_arr), dtype=float)
    clamped = raw > r_arr
    e = np.where(clamped, r_arr, raw)
    if r_arr.ndim == 0:
        return ThicknessValue(float(e), bool(clamped))
    return ThicknessValue(e, clamped)


def parse_thickness(text):
    """Parse ``ball | prop:<g> | const:<e0> | pow:<c>,<alpha> | table:<path>``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    try:
        if kind == "ball" and not arg:
            return Ball()
        if kind == "prop":
            return Proportional(float(arg))
        if kind == "const":
            return Constant(float(arg))
        if kind == "pow":
            c, alpha = arg.split(",")
            return PowerLaw(float(c), float(alpha))
        if kind == "table":
            return Table.from_csv(arg)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse thickness {text!r}: {exc}") from exc
    raise DomainError(f"unknown thickness {text!r}")
