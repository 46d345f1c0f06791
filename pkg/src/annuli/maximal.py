"""Maximal averages, superlevel sets and the thin/thick dichotomy experiment.

The experiment follows the counterexample argument. For a point ``x`` with
``1 < |x| <= a``, the average of the counterexample ``f`` over the annulus of
outer radius ``|x|`` centered at ``x`` (which grazes the origin, where ``f``
is singular) grows like ``ln|ln e| / |x|^(d-1)`` as the thickness ``e``
shrinks. Taking ``lam = C ln|ln delta| / a^(d-1)`` puts the whole probe
annulus ``1 < |x| <= a`` in the superlevel set, so

    lam^p |{M f >= lam}| / int f^p  >=  C^p v_d (1 - a^-d) (ln|ln delta|)^p / int f^p

with ``p = d/(d-1)``, which is unbounded as ``delta -> 0``. With proportional
thickness the same ratio stays bounded.
"""

from __future__ import annotations

import math
import struct
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .fields import Counterexample, critical_norm, power_integral
from .geometry import Constant, Proportional, check_dim, thickness, unit_ball_volume
from .parallel import pmap
from .quadrature import (
    Estimate,
    annulus_average,
    sample_sphere,
)

# Slope of  |x|^(d-1) * M_{|x|} f(x)  against  ln|ln delta|  at |x| = 1.5,
# fitted by growth_regression() over delta in DEFAULT_DELTAS and frozen here.
CALIBRATION = {2: 0.2765667453, 3: 0.4611569734}

DEFAULT_DELTAS = (1e-2, 1e-4, 1e-8, 1e-16)
DELTA_FLOOR = 1e-16


def _radius_stream(r):
    # Monte Carlo stream keyed on the radius itself, so refining a grid reuses draws
    return int.from_bytes(struct.pack("<d", float(r)), "little") & 0x7FFFFFFF


def maximal_over_radii(field, x, radii, fn, scheme=None):
    """``max_r |M_r field(x)|`` over a finite radius grid.

    Each annulus has outer radius ``r`` and thickness ``fn(r)``.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0:
        raise DomainError("radius grid is empty")
    if np.any(radii <= 0):
        raise DomainError("radii must be > 0")

    def one(r):
        e, _ = thickness(fn, r)
        est = annulus_average(field, x, r, e, scheme=scheme, stream=_radius_stream(r))
        return abs(est.value)

    return max(pmap(one, radii.tolist()))


def proof_radius_average(field, x, fn, scheme=None):
    """Average over the annulus centered at ``x`` with outer radius ``|x|``.

    That annulus always reaches the origin. Returns an ``Estimate``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r = float(np.sqrt(np.dot(x, x)))
    if r == 0:
        raise DomainError("proof_radius_average needs x != 0")
    e, _ = thickness(fn, r)
    return annulus_average(field, x, r, e, scheme=scheme, stream=_radius_stream(r))


def proof_radius_profile(field, d, radii, fn, scheme=None):
    """``proof_radius_average`` at ``x = (rho, 0, ..., 0)`` for each ``rho``.

    For a radial field this is the full superlevel information: the value
    depends on ``x`` only through ``|x|``.
    """

    def one(rho):
        x = np.zeros(d)
        x[0] = rho
        return proof_radius_average(field, x, fn, scheme).value

    return np.array(pmap(one, list(np.asarray(radii, dtype=float))))


# -- sphere / annulus intersection ----------------------------------------


def cap_measure(d, xnorm, eps, rho, method="exact3", n=10**6, seed=0):
    """Normalized measure of ``S_rho`` (centered at 0) inside the annulus
    centered at ``x`` with outer radius ``|x|`` and thickness ``eps``.

    ``method="exact3"`` (d = 3 only) returns ``(2 eps |x| - eps^2) / (4 rho |x|)``;
    ``method="mc"`` counts uniform sphere samples and reports a binomial
    standard error. Requires ``|x| > 1 >= rho >= eps > 0``.
    """
    d = check_dim(d)
    if not (xnorm > 1 >= rho >= eps > 0):
        raise DomainError(f"need |x| > 1 >= rho >= eps > 0, got |x|={xnorm}, rho={rho}, eps={eps}")
    if method == "exact3":
        if d != 3:
            raise DomainError("the exact cap formula is for d = 3")
        return Estimate((2.0 * eps * xnorm - eps * eps) / (4.0 * rho * xnorm), 0.0)
    if method == "mc":
        pts = sample_sphere(d, rho, n, seed)
        x = np.zeros(d)
        x[-1] = xnorm
        dist = np.sqrt(np.sum((pts - x) ** 2, axis=1))
        hit = (dist >= xnorm - eps) & (dist <= xnorm)
        p = hit.mean()
        return Estimate(float(p), math.sqrt(max(p * (1 - p), 1.0 / n) / n))
    raise DomainError(f"unknown cap_measure method {method!r}")


# -- superlevel sets ----------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod [lo_i, hi_i]``."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DomainError("box corners must have the same, nonzero dimension")
        if any(b <= a for a, b in zip(lo, hi)):
            raise DomainError("box is empty")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return len(self.lo)

    @property
    def volume(self):
        return float(np.prod(np.subtract(self.hi, self.lo)))


@dataclass(frozen=True)
class RadialBand:
    """``{x in R^d : inner < |x| <= outer}``; ``inner = 0`` gives a ball."""

    d: int
    inner: float
    outer: float

    def __post_init__(self):
        check_dim(self.d)
        if not 0 <= self.inner < self.outer:
            raise DomainError(f"need 0 <= inner < outer, got {self.inner}, {self.outer}")

    @property
    def dim(self):
        return self.d

    @property
    def volume(self):
        return unit_ball_volume(self.d) * (self.outer**self.d - self.inner**self.d)


def _band_shells(band, n_rad):
    edges = np.linspace(band.inner, band.outer, n_rad + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    vols = unit_ball_volume(band.d) * np.diff(edges**band.d)
    return mids, vols


def _box_grid(box, n_grid):
    axes = [lo + (np.arange(n_grid) + 0.5) * (hi - lo) / n_grid for lo, hi in zip(box.lo, box.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    return pts, box.volume / n_grid**box.dim


def _point_values(field, pts, fn, scheme):
    if field.radial:
        norms = np.sqrt(np.sum(pts * pts, axis=1))
        uniq, inv = np.unique(norms, return_inverse=True)
        vals = proof_radius_profile(field, pts.shape[1], uniq, fn, scheme)
        return vals[inv]
    return np.array(pmap(lambda p: proof_radius_average(field, p, fn, scheme).value, list(pts)))


def superlevel_values(field, fn, domain, n_grid=None, scheme=None, n_mc=20000, seed=0):
    """Cell values and cell volumes of ``x -> M_{|x|} field(x)`` on a domain.

    Radial fields on a ``RadialBand`` need one evaluation per radial cell.
    Other fields use a polar grid in d = 2 and Monte Carlo cells in d >= 3.
    A ``Box`` uses a midpoint grid (d <= 3) or Monte Carlo.
    """
    d = domain.dim
    if isinstance(domain, RadialBand):
        n_rad = n_grid or 256
        mids, vols = _band_shells(domain, n_rad)
        if field.radial:
            return proof_radius_profile(field, d, mids, fn, scheme), vols
        if d == 2:
            n_ang = 2 * n_rad
            phi = (np.arange(n_ang) + 0.5) * (2 * math.pi / n_ang)
            pts = np.stack(
                [(mids[:, None] * np.cos(phi)).ravel(), (mids[:, None] * np.sin(phi)).ravel()], axis=1
            )
            return _point_values(field, pts, fn, scheme), np.repeat(vols / n_ang, n_ang)
        rng = np.random.default_rng(seed)
        rad = (domain.inner**d + rng.random(n_mc) * (domain.outer**d - domain.inner**d)) ** (1 / d)
        g = rng.standard_normal((n_mc, d))
        pts = rad[:, None] * g / np.linalg.norm(g, axis=1)[:, None]
        return _point_values(field, pts, fn, scheme), np.full(n_mc, domain.volume / n_mc)
    if isinstance(domain, Box):
        if d <= 3:
            pts, cell = _box_grid(domain, n_grid or (128 if d <= 2 else 32))
            return _point_values(field, pts, fn, scheme), np.full(len(pts), cell)
        rng = np.random.default_rng(seed)
        pts = rng.uniform(domain.lo, domain.hi, (n_mc, d))
        return _point_values(field, pts, fn, scheme), np.full(n_mc, domain.volume / n_mc)
    raise DomainError(f"unknown domain {domain!r}")


def superlevel_volume(field, lam, fn, domain, n_grid=None, scheme=None, n_mc=20000, seed=0):
    """Measure of ``{x in domain : M_{|x|} field(x) >= lam}``."""
    if not lam > 0:
        raise DomainError(f"threshold must be > 0, got {lam}")
    vals, vols = superlevel_values(field, fn, domain, n_grid, scheme, n_mc, seed)
    return float(np.sum(vols[vals >= lam]))


def weak_type_ratio(field, p, lam, fn, domain, scheme=None, n_grid=None, d=None):
    """``lam^p |{M_{|x|} field >= lam}| / int |field|^p``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    norm_p = power_integral(field, p, d if d is not None else domain.dim)
    if norm_p == 0:
        raise DomainError("field has zero L^p norm")
    vol = superlevel_volume(field, lam, fn, domain, n_grid=n_grid, scheme=scheme)
    return lam**p * vol / norm_p


# -- growth regression and the dichotomy report --------------------------------


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    r2: float
    loglog: tuple
    scaled_values: tuple


def growth_regression(d, xnorm=1.5, deltas=DEFAULT_DELTAS, directions=8, scheme=None):
    """Regress ``|x|^(d-1) min_dir M_{|x|} f(x)`` on ``ln|ln delta|``.

    ``f`` is the counterexample and the thickness is ``const:delta``.
    """
    f = Counterexample(d)
    angles = 2 * math.pi * np.arange(directions) / directions
    loglog, scaled = [], []
    for delta in deltas:
        _check_delta(delta)
        vals = []
        for th in angles:
            x = np.zeros(d)
            x[0], x[1] = xnorm * math.cos(th), xnorm * math.sin(th)
            vals.append(proof_radius_average(f, x, Constant(delta), scheme).value)
        loglog.append(math.log(abs(math.log(delta))))
        scaled.append(min(vals) * xnorm ** (d - 1))
    X, Y = np.array(loglog), np.array(scaled)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    r2 = 1.0 - np.sum(resid**2) / np.sum((Y - Y.mean()) ** 2)
    return GrowthFit(float(slope), float(intercept), float(r2), tuple(loglog), tuple(scaled))


def calibration_constant(d):
    if d not in CALIBRATION:
        raise DomainError(f"no calibration constant shipped for d={d} (available: {sorted(CALIBRATION)})")
    return CALIBRATION[d]


def threshold(d, delta, a, C=None):
    """``lam(delta) = C ln|ln delta| / a^(d-1)``."""
    C = calibration_constant(d) if C is None else C
    return C * math.log(abs(math.log(delta))) / a ** (d - 1)


def _check_delta(delta):
    if not DELTA_FLOOR <= delta < 0.25:
        raise DomainError(f"delta must lie in [{DELTA_FLOOR}, 1/4), got {delta}")


@dataclass(frozen=True)
class ReportRow:
    delta: float
    h: float
    lam: float
    measure: float
    norm_p: float
    ratio: float
    paper_bound: float

    def as_dict(self):
        row = asdict(self)
        row["lambda"] = row.pop("lam")
        return {key: row[key] for key in REPORT_COLUMNS}


REPORT_COLUMNS = ("delta", "h", "lambda", "measure", "norm_p", "ratio", "paper_bound")


@dataclass(frozen=True)
class WeakTypeReport:
    d: int
    a: float
    p: float
    thickness: str
    rows: tuple

    def ratios(self):
        return np.array([row.ratio for row in self.rows])


def dichotomy_report(d, a, deltas=DEFAULT_DELTAS, p=None, C=None, n_rad=256, scheme=None):
    """Weak-type ratios of the counterexample for shrinking constant thickness.

    For each ``delta`` the thickness is ``const:delta``, the threshold is
    ``lam(delta)``, and the superlevel set is measured on the probe annulus
    ``1 < |x| <= a`` (a polar grid with ``n_rad`` radial cells). Rows are
    sorted by ``delta`` descending.
    """
    d = check_dim(d)
    if d < 2:
        raise DomainError("the dichotomy experiment needs d >= 2")
    if not a > 1:
        raise DomainError(f"need a > 1, got {a}")
    p = d / (d - 1) if p is None else p
    C = calibration_constant(d) if C is None else C
    f = Counterexample(d)
    norm_p = power_integral(f, p)
    band = RadialBand(d, 1.0, a)
    rows = []
    for delta in sorted(deltas, reverse=True):
        _check_delta(delta)
        lam = threshold(d, delta, a, C)
        vals, vols = superlevel_values(f, Constant(delta), band, n_grid=n_rad, scheme=scheme)
        measure = float(np.sum(vols[vals >= lam]))
        bound = lam**p * band.volume / norm_p
        rows.append(ReportRow(delta, 1.0, lam, measure, norm_p, lam**p * measure / norm_p, bound))
    return WeakTypeReport(d, a, p, "const:<delta>", tuple(rows))


def control_report(d, a, deltas=DEFAULT_DELTAS, gamma=0.5, p=None, n_rad=256, reach=3.0, scheme=None):
    """Weak-type constant of the counterexample for proportional thickness.

    Thickness ``prop:gamma`` does not depend on ``delta``; each row records
    ``sup_lam lam^p |{M f >= lam}| / int f^p`` over ``|x| <= reach * a``.
    The radial profile is sampled at log-spaced radii ``rho_i``; the cell
    ``(rho_(i-1), rho_i]`` is credited with the value at its outer edge, which
    under-counts superlevel sets when the profile decreases outward.
    """
    d = check_dim(d)
    p = d / (d - 1) if p is None else p
    f = Counterexample(d)
    norm_p = power_integral(f, p)
    outer = reach * a
    edges = np.geomspace(1e-4 * outer, outer, n_rad)
    vals = proof_radius_profile(f, d, edges, Proportional(gamma), scheme)
    vols = unit_ball_volume(d) * np.diff(np.concatenate([[0.0], edges]) ** d)
    order = np.argsort(-vals, kind="stable")
    cum = np.cumsum(vols[order])
    scores = vals[order] ** p * cum
    best = int(np.argmax(scores))
    lam, measure = float(vals[order][best]), float(cum[best])
    ratio = float(scores[best]) / norm_p
    rows = []
    for delta in sorted(deltas, reverse=True):
        _check_delta(delta)
        rows.append(ReportRow(delta, 1.0, lam, measure, norm_p, ratio, math.nan))
    return WeakTypeReport(d, a, p, f"prop:{gamma!r}", tuple(rows))


def critical_norm_check(d, rel_tol=5e-3):
    closed, quad = critical_norm(d)
    return abs(quad - closed) <= rel_tol * closed, closed, quad
