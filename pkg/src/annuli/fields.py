"""Scalar test functions on R^d.

The central object is the critical counterexample

    f(x) = -1 / (|x|^(d-1) ln|x|)   for 0 < |x| < 1/2,   f(x) = 0 otherwise,

which lies in L^(d/(d-1)) but has thin-annulus averages that grow like
``ln|ln e|`` when the annulus grazes the origin. The other fields are
simple references (indicators, powers, plane waves) used as controls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .geometry import check_dim, unit_ball_volume, unit_sphere_area


class ScalarField:
    """A real-valued function on R^d evaluated on arrays of shape ``(..., d)``."""

    radial = False
    dim = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def constant(self):
        """The field's value if it is constant, else ``None``."""
        return None

    def profile(self, s):
        """Value as a function of ``|x|``; only for radial fields."""
        raise DomainError(f"{type(self).__name__} is not radial")

    def support_radius(self):
        """Radius outside which a radial field vanishes (``inf`` if none)."""
        return math.inf

    def breakpoints(self):
        """Radii where the radial profile is not smooth."""
        return ()

    def spec(self):
        raise NotImplementedError

    def _check_points(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim is not None and x.shape[-1] != self.dim:
            raise DomainError(f"{self.spec()} lives in R^{self.dim}, got points in R^{x.shape[-1]}")
        return x


class RadialField(ScalarField):
    radial = True

    def __call__(self, x):
        x = self._check_points(x)
        return self.profile(np.sqrt(np.sum(x * x, axis=-1)))


@dataclass(frozen=True)
class Counterexample(RadialField):
    d: int

    def __post_init__(self):
        check_dim(self.d)
        if self.d < 2:
            raise DomainError("the counterexample is defined for d >= 2")

    @property
    def dim(self):
        return self.d

    def profile(self, s):
        s = np.asarray(s, dtype=float)
        inside = (s > 0) & (s < 0.5)
        safe = np.where(inside, s, 0.25)
        val = np.where(inside, -1.0 / (safe ** (self.d - 1) * np.log(safe)), 0.0)
        return np.where(s == 0, np.inf, val)

    def support_radius(self):
        return 0.5

    def breakpoints(self):
        return (0.5,)

    def spec(self):
        return "cex"


@dataclass(frozen=True)
class ScaledCounterexample(RadialField):
    """``g(x) = f(x / h)`` for the counterexample ``f``."""

    d: int
    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f"scale h must be > 0, got {self.h}")
        Counterexample(self.d)

    @property
    def dim(self):
        return self.d

    def profile(self, s):
        return Counterexample(self.d).profile(np.asarray(s, dtype=float) / self.h)

    def support_radius(self):
        return 0.5 * self.h

    def breakpoints(self):
        return (0.5 * self.h,)

    def spec(self):
        return f"cex-scaled:{self.h!r}"


@dataclass(frozen=True)
class BallIndicator(RadialField):
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"ball radius must be > 0, got {self.R}")

    def profile(self, s):
        return (np.asarray(s, dtype=float) <= self.R).astype(float)

    def support_radius(self):
        return self.R

    def breakpoints(self):
        return (self.R,)

    def spec(self):
        return f"ball-ind:{self.R!r}"


@dataclass(frozen=True)
class RadialPower(RadialField):
    """``coef * |x|**beta``; ``beta = 0`` gives the constant ``coef``."""

    beta: float
    coef: float = 1.0

    def profile(self, s):
        s = np.asarray(s, dtype=float)
        if self.beta == 0:
            return np.full_like(s, self.coef)
        with np.errstate(divide="ignore"):
            return self.coef * np.power(s, self.beta)

    @property
    def constant(self):
        if self.beta == 0 or self.coef == 0:
            return float(self.coef)
        return None

    def spec(self):
        if self.coef != 1.0:
            return f"radial-pow:{self.beta!r},{self.coef!r}"
        return f"radial-pow:{self.beta!r}"


@dataclass(frozen=True)
class TrigWave(ScalarField):
    """``cos(2 pi k . x)`` for an integer frequency vector ``k``."""

    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        check_dim(len(self.k))

    @property
    def dim(self):
        return len(self.k)

    def __call__(self, x):
        x = self._check_points(x)
        return np.cos(2.0 * math.pi * (x @ np.asarray(self.k, dtype=float)))

    @property
    def constant(self):
        return 1.0 if not any(self.k) else None

    def spec(self):
        return "trig:" + ",".join(str(v) for v in self.k)


def parse_field(text, dim):
    """Parse ``cex | cex-scaled:<h> | ball-ind:<R> | radial-pow:<beta>[,<coef>] | trig:<k1>,...``."""
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "cex" and not arg:
            return Counterexample(dim)
        if kind == "cex-scaled":
            return ScaledCounterexample(dim, float(arg))
        if kind == "ball-ind":
            return BallIndicator(float(arg))
        if kind == "radial-pow":
            parts = [float(v) for v in arg.split(",")]
            return RadialPower(*parts)
        if kind == "trig":
            k = tuple(int(v) for v in arg.split(","))
            if len(k) != dim:
                raise DomainError(f"trig frequency has {len(k)} entries, dimension is {dim}")
            return TrigWave(k)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse field {text!r}: {exc}") from exc
    raise DomainError(f"unknown field {text!r}")


# -- norms ------------------------------------------------------------------


def _critical_closed_form(d):
    return unit_sphere_area(d) * (d - 1) * math.log(2.0) ** (-1.0 / (d - 1))


def _counterexample_power_integral(d, p, nodes=64, panels=24):
    """Radial quadrature of ``int f^p`` for the unscaled counterexample.

    With ``rho = exp(-u)`` and ``u = ln 2 * exp(v)``, the integrand
    ``s_d rho^(d-1) f(rho)^p d rho`` becomes
    ``s_d exp(-u (d - p(d-1))) u^(1-p) exp(v) ln2 dv``: no underflow and an
    exponentially decaying tail in ``v``.
    """
    q = d - p * (d - 1)
    if q < 0 or (q == 0 and p <= 1):
        return math.inf
    x, w = leggauss(nodes)
    # tail in v decays like exp(v (1 - p)) when q == 0, faster otherwise
    rate = (p - 1.0) if q == 0 else 1.0
    v_max = 40.0 / max(rate, 1e-3)
    edges = np.linspace(0.0, v_max, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v = 0.5 * (x + 1.0) * (b - a) + a
        u = math.log(2.0) * np.exp(v)
        integrand = np.exp(-u * q) * u ** (1.0 - p)
        total += 0.5 * (b - a) * float(np.dot(w, integrand))
    return unit_sphere_area(d) * total


def critical_norm(d):
    """``int f^(d/(d-1))`` for the counterexample: closed form and quadrature.

    Returns ``(closed_form, quadrature)``; the two agree to well under 0.5%.

    >>> closed, quad = critical_norm(2)
    >>> round(closed, 5)
    9.06472
    """
    d = check_dim(d)
    if d < 2:
        raise DomainError("critical_norm needs d >= 2")
    p = d / (d - 1)
    return _critical_closed_form(d), _counterexample_power_integral(d, p)


def power_integral(field, p, d=None):
    """``int_{R^d} |field|^p dx`` (closed form where known, else quadrature).

    ``d`` is only needed for fields that do not carry their own dimension.
    """
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if isinstance(field, Counterexample):
        dd = field.d
        if p == dd / (dd - 1):
            return _critical_closed_form(dd)
        return _counterexample_power_integral(dd, p)
    if isinstance(field, ScaledCounterexample):
        return field.h**field.d * power_integral(Counterexample(field.d), p)
    if isinstance(field, BallIndicator):
        if d is None:
            raise DomainError("the L^p norm of a ball indicator needs the dimension d")
        return unit_ball_volume(check_dim(d)) * field.R**d
    if isinstance(field, RadialPower) and field.coef == 0:
        return 0.0
    raise DomainError(f"{field.spec()} has no finite L^p norm on R^d")


def lower_bound_rhs(d, r, e):
    """``ln|ln e| / r^(d-1)``, or ``None`` outside ``r > 1, 0 < e <= 1/4``."""
    if not (r > 1 and 0 < e <= 0.25):
        return None
    return math.log(abs(math.log(e))) / r ** (d - 1)
