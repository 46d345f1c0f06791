"""Uniform sampling and averaging on annuli and spheres.

Three schemes estimate the mean of a function over ``x + ann(r, e)``:

``MonteCarlo(n, seed)``
    i.i.d. uniform points; reports the standard error. Points are drawn in
    fixed-size chunks, each from its own ``SeedSequence(seed, spawn_key=(stream,
    chunk))``, and chunk statistics are merged in chunk order, so results do
    not depend on how many threads evaluate the chunks.
``Product(n_rad, n_ang)``
    Gauss-Legendre in the radius about ``x`` times an angular rule (uniform
    azimuth in d = 2; Gauss-Legendre in cos(polar angle) times uniform azimuth
    in d = 3). Reports the difference against the half-resolution rule.
``Shell(n)``
    For fields that are radial about the origin. Integrates over spheres
    ``|y| = s`` centered at the origin, with the exact measure of the part of
    each sphere inside the annulus, on log-spaced Gauss-Legendre panels in
    ``s``. Handles annuli down to ``e ~ 1e-16 r`` and the counterexample's
    singularity at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .geometry import (
    annulus_volume,
    band_fraction,
    check_dim,
    check_norm,
    check_shell,
    shell_power_difference,
    unit_sphere_area,
)
from .parallel import pmap

CHUNK = 1 << 16
_MAX_RESAMPLE = 64


class Estimate(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class MonteCarlo:
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 100:
            raise DomainError(f"Monte Carlo needs at least 100 samples, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def spec(self):
        return f"mc:{self.n},{self.seed}"


@dataclass(frozen=True)
class Product:
    n_rad: int = 16
    n_ang: int = 64

    def __post_init__(self):
        if self.n_rad < 8 or self.n_ang < 16:
            raise DomainError("product rule needs n_rad >= 8 and n_ang >= 16")

    def spec(self):
        return f"prod:{self.n_rad},{self.n_ang}"


@dataclass(frozen=True)
class Shell:
    n: int = 32
    panel_width: float = 0.5

    def __post_init__(self):
        if self.n < 4:
            raise DomainError("shell rule needs at least 4 nodes per panel")

    def spec(self):
        return f"shell:{self.n}"


def parse_scheme(text):
    """Parse ``mc:<n>,<seed> | prod:<n_rad>,<n_ang> | shell:<n>``."""
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "mc":
            n, seed = arg.split(",")
            return MonteCarlo(int(float(n)), int(seed))
        if kind == "prod":
            a, b = arg.split(",")
            return Product(int(a), int(b))
        if kind == "shell":
            return Shell(int(arg))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse scheme {text!r}: {exc}") from exc
    raise DomainError(f"unknown scheme {text!r}")


# -- sampling ---------------------------------------------------------------


def _chunk_rng(seed, stream, chunk):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, chunk)))


def _chunk_sizes(n):
    full, rest = divmod(n, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _directions(rng, d, n):
    g = rng.standard_normal((n, d))
    return g / np.sqrt(np.sum(g * g, axis=1))[:, None]


def _annulus_draw(rng, d, r, e, norm, n):
    inner = r - e
    u = rng.random(n)
    # radial law with density ~ rho^(d-1) on [r - e, r], for both norms
    rho = (inner**d + u * shell_power_difference(d, r, e)) ** (1.0 / d)
    if norm == "euclidean":
        return rho[:, None] * _directions(rng, d, n)
    # uniform on the surface of the cube of half-side rho: pick a face, then a point on it
    face = rng.integers(0, 2 * d, n)
    pts = rng.uniform(-1.0, 1.0, (n, d))
    axis = face // 2
    pts[np.arange(n), axis] = np.where(face % 2 == 0, 1.0, -1.0)
    return rho[:, None] * pts


def sample_annulus(d, r, e, norm="euclidean", n=1000, seed=0, stream=0):
    """``n`` i.i.d. uniform points of the annulus ``ann(r, e)`` centered at 0.

    Euclidean annuli use the inverse radial CDF
    ``rho = ((r-e)^d + u (r^d - (r-e)^d))^(1/d)`` and a Gaussian direction.
    Max-norm annuli use the same radial law on the sup norm and a uniform
    point on the surface of the cube ``|t|_inf = rho``.
    """
    d = check_dim(d)
    check_norm(norm)
    check_shell(r, e)
    if n < 1:
        raise DomainError(f"need n >= 1 samples, got {n}")
    chunks = [
        _annulus_draw(_chunk_rng(seed, stream, i), d, r, e, norm, m)
        for i, m in enumerate(_chunk_sizes(n))
    ]
    return np.concatenate(chunks, axis=0)


def sample_sphere(d, rho, n=1000, seed=0, stream=0):
    """``n`` i.i.d. uniform points on the sphere of radius ``rho`` centered at 0."""
    d = check_dim(d)
    if not rho > 0:
        raise DomainError(f"sphere radius must be > 0, got {rho}")
    if n < 1:
        raise DomainError(f"need n >= 1 samples, got {n}")
    chunks = [
        rho * _directions(_chunk_rng(seed, stream, i), d, m)
        for i, m in enumerate(_chunk_sizes(n))
    ]
    return np.concatenate(chunks, axis=0)


# -- Monte Carlo engine -----------------------------------------------------


def _merge(stats):
    # Chan et al. pairwise merge of (count, mean, M2), applied in list order
    n, mean, m2 = stats[0]
    for nb, mb, m2b in stats[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * (nb / tot)
        m2 = m2 + m2b + abs(delta) ** 2 * (n * nb / tot)
        n = tot
    return n, mean, m2


def _mc_mean(g, draw, scheme, stream):
    """Mean of ``g`` over points produced by ``draw(rng, m)``."""

    def run(job):
        i, m = job
        rng = _chunk_rng(scheme.seed, stream, i)
        pts = draw(rng, m)
        vals = np.asarray(g(pts))
        bad = ~np.isfinite(vals)
        tries = 0
        while bad.any():
            # singular hits have probability zero; redraw just those points
            tries += 1
            if tries > _MAX_RESAMPLE:
                raise DomainError("integrand is non-finite on a set of positive measure")
            idx = np.flatnonzero(bad)
            pts[idx] = draw(rng, idx.size)
            vals[idx] = np.asarray(g(pts[idx]))
            bad = ~np.isfinite(vals)
        mean = vals.mean()
        return m, mean, float(np.sum(np.abs(vals - mean) ** 2))

    jobs = list(enumerate(_chunk_sizes(scheme.n)))
    n, mean, m2 = _merge(pmap(run, jobs))
    var = m2 / (n - 1)
    return Estimate(mean, math.sqrt(var / n))


# -- deterministic rules ----------------------------------------------------


def _gl(n, a, b):
    x, w = leggauss(n)
    return a + 0.5 * (x + 1.0) * (b - a), 0.5 * (b - a) * w


def _radial_nodes(n, r, e):
    # nodes written as r - (fraction of e) so thin shells keep their spread
    x, w = leggauss(n)
    return r - 0.5 * e * (1.0 - x), 0.5 * e * w


def _angular_rule(d, n_ang):
    """Unit directions and weights (summing to 1) for the sphere S^(d-1)."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    phi = (np.arange(n_ang) + 0.5) * (2.0 * math.pi / n_ang)
    if d == 2:
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(n_ang, 1.0 / n_ang)
    if d == 3:
        ct, wt = leggauss(max(n_ang // 2, 2))
        st = np.sqrt(1.0 - ct * ct)
        dirs = np.stack(
            [
                (st[:, None] * np.cos(phi)[None, :]).ravel(),
                (st[:, None] * np.sin(phi)[None, :]).ravel(),
                np.repeat(ct, n_ang),
            ],
            axis=1,
        )
        return dirs, (0.5 * wt[:, None] * np.full(n_ang, 1.0 / n_ang)[None, :]).ravel()
    raise DomainError(f"the product rule is available for d <= 3, got d={d}")


def _product_annulus(g, d, x, r, e, n_rad, n_ang):
    rho, wr = _radial_nodes(n_rad, r, e)
    wr = wr * rho ** (d - 1)
    dirs, wa = _angular_rule(d, n_ang)
    pts = x[None, None, :] + rho[:, None, None] * dirs[None, :, :]
    vals = np.asarray(g(pts.reshape(-1, d))).reshape(len(rho), len(wa))
    return (wr @ (vals @ wa)) / wr.sum()


def _product_sphere(g, d, x, rho, n_ang):
    dirs, wa = _angular_rule(d, n_ang)
    return np.asarray(g(x[None, :] + rho * dirs)) @ wa


def _with_half(rule, full, half):
    value = rule(*full)
    coarse = rule(*half)
    return Estimate(value, float(abs(value - coarse)))


# -- shell rule for radial fields -------------------------------------------


def _log_panels(lo, hi, cuts, width):
    edges = [lo] + sorted(c for c in set(cuts) if lo < c < hi) + [hi]
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        la, lb = math.log(a), math.log(b)
        k = max(1, math.ceil((lb - la) / width))
        grid = np.linspace(la, lb, k + 1)
        out.extend(zip(grid[:-1], grid[1:]))
    return out


def _graded(points, lo, hi, scale):
    # extra edges at distance scale * 4^k on both sides of each point, so a
    # layer of width ~scale next to a tangency is resolved on every length scale
    out = []
    for p in points:
        step = scale
        while step < hi - lo:
            out.extend((p - step, p + step))
            step *= 4.0
    return [v for v in out if lo < v < hi]


def _smoothstep_gl(n):
    # nodes of GL under t -> t^2 (3 - 2t): clusters at both panel ends,
    # turning sqrt-type kinks at breakpoints into smooth integrands
    x, w = leggauss(n)
    t = 0.5 * (x + 1.0)
    return t * t * (3.0 - 2.0 * t), 0.5 * w * 6.0 * t * (1.0 - t)


def _shell_mass(field, d, c, r, e, n, width):
    """``int_{x + ann(r, e)} field`` for a radial field, with ``c = |x|``."""
    support = field.support_radius()
    breaks = [b for b in field.breakpoints()]
    sd = unit_sphere_area(d)
    if c == 0.0:
        lo, hi = r - e, min(r, support)
        if hi <= lo:
            return 0.0
        cuts = [lo] + sorted(b for b in breaks if lo < b < hi) + [hi]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            s, w = _gl(n, a, b)
            total += float(np.dot(w, field.profile(s) * s ** (d - 1)))
        return sd * total

    cmr = c - r
    s_lo = max(0.0, cmr, -(cmr + e))
    s_hi = min(c + r, support)
    if s_hi <= s_lo:
        return 0.0
    tangent = [abs(cmr), c + r, abs(cmr + e), c + (r - e)]
    cuts = tangent + breaks
    if s_lo == 0.0:
        first = min([v for v in cuts if v > 0] + [e, s_hi])
        s_lo = 1e-12 * first
    cuts += _graded(tangent, s_lo, s_hi, e)
    u, wu = _smoothstep_gl(n)
    total = 0.0
    span = 2.0 * r - e
    for la, lb in _log_panels(s_lo, s_hi, cuts, width):
        t = la + (lb - la) * u
        w = (lb - la) * wu
        s = np.exp(t)
        lower = (s * s + cmr * (c + r)) / (2.0 * s * c)
        band = e * span / (2.0 * s * c)
        frac = band_fraction(lower, band, d)
        vals = field.profile(s)
        vals = np.where(frac > 0, vals, 0.0)
        total += float(np.dot(w, vals * s**d * frac))
    return sd * total


def _shell_average(field, d, c, r, e, n, width):
    vol = annulus_volume(d, r, e)
    return _shell_mass(field, d, c, r, e, n, width) / vol


# -- public averages --------------------------------------------------------


def _as_center(x, d=None):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise DomainError("center must be a single point")
    if d is not None and x.size != d:
        raise DomainError(f"center has dimension {x.size}, expected {d}")
    return x


def annulus_mean(g, x, r, e, norm="euclidean", scheme=None, stream=0):
    """Mean of a vectorized function ``g(points)`` over ``x + ann(r, e)``.

    ``g`` receives an ``(m, d)`` array and returns ``m`` real or complex
    values. The shell rule is not available here (it needs a radial field).
    """
    x = _as_center(x)
    d = check_dim(x.size)
    check_norm(norm)
    check_shell(r, e)
    scheme = scheme or Product()
    if isinstance(scheme, MonteCarlo):

        def draw(rng, m):
            return x[None, :] + _annulus_draw(rng, d, r, e, norm, m)

        return _mc_mean(g, draw, scheme, stream)
    if isinstance(scheme, Product):
        if norm != "euclidean":
            raise DomainError("the product rule covers Euclidean annuli only; use mc for max-norm annuli")
        _angular_rule(d, scheme.n_ang)
        full = (g, d, x, r, e, scheme.n_rad, scheme.n_ang)
        half = (g, d, x, r, e, scheme.n_rad // 2, scheme.n_ang // 2)
        return _with_half(_product_annulus, full, half)
    if isinstance(scheme, Shell):
        raise DomainError("the shell rule needs a radial field; use annulus_average")
    raise DomainError(f"unknown scheme {scheme!r}")


def annulus_average(field, x, r, e, norm="euclidean", scheme=None, stream=0):
    """Average of ``field`` over the annulus ``x + ann(r, e)``.

    Parameters
    ----------
    field : ScalarField
    x : array_like, shape (d,)
        Center of the annulus.
    r, e : float
        Outer radius and thickness, ``0 < e <= r``.
    norm : {"euclidean", "max"}
    scheme : MonteCarlo, Product or Shell
        Defaults to ``Shell()`` for radial fields in d >= 2, else ``Product()``.
    stream : int
        Monte Carlo stream index, for independent draws under one seed.

    Returns
    -------
    Estimate
        ``(value, error)`` where ``error`` is the scheme's error estimate.
    """
    x = _as_center(x, field.dim)
    d = check_dim(x.size)
    if field.constant is not None:
        check_norm(norm)
        check_shell(r, e)
        return Estimate(field.constant, 0.0)
    if scheme is None:
        scheme = Shell() if (field.radial and d >= 2 and norm == "euclidean") else Product()
    if isinstance(scheme, Shell):
        check_shell(r, e)
        if norm != "euclidean" or not field.radial or d < 2:
            raise DomainError("the shell rule needs a radial field, a Euclidean annulus and d >= 2")
        c = float(np.sqrt(np.dot(x, x)))
        full = _shell_average(field, d, c, r, e, scheme.n, scheme.panel_width)
        half = _shell_average(field, d, c, r, e, max(scheme.n // 2, 2), scheme.panel_width)
        return Estimate(full, max(abs(full - half), 1e-15 * abs(full)))
    return annulus_mean(field, x, r, e, norm, scheme, stream)


def sphere_mean(g, x, rho, scheme=None, stream=0):
    """Mean of ``g(points)`` over the sphere of radius ``rho`` about ``x``."""
    x = _as_center(x)
    d = check_dim(x.size)
    if not rho > 0:
        raise DomainError(f"sphere radius must be > 0, got {rho}")
    scheme = scheme or Product()
    if isinstance(scheme, MonteCarlo):

        def draw(rng, m):
            return x[None, :] + rho * _directions(rng, d, m)

        return _mc_mean(g, draw, scheme, stream)
    if isinstance(scheme, Product):
        _angular_rule(d, scheme.n_ang)
        return _with_half(_product_sphere, (g, d, x, rho, scheme.n_ang), (g, d, x, rho, scheme.n_ang // 2))
    raise DomainError(f"sphere averages support mc and prod schemes, got {scheme!r}")


def sphere_average(field, x, rho, scheme=None, stream=0):
    """Average of ``field`` over the sphere of radius ``rho`` centered at ``x``."""
    x = _as_center(x, field.dim)
    if field.constant is not None:
        if not rho > 0:
            raise DomainError(f"sphere radius must be > 0, got {rho}")
        return Estimate(field.constant, 0.0)
    return sphere_mean(field, x, rho, scheme, stream)
