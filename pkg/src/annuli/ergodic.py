"""Translation flows on the torus and their annulus averages.

``T_t w = w + A t (mod 1)`` is a measure-preserving action of R^d on the
d-torus. For a trigonometric polynomial ``phi = sum_k c_k e(k . w)`` the
average over an annulus is exact:

    avg_r phi(w) = sum_k c_k e(k . w) kernel_r(|A^T k|),

so the mean-square distance to the invariant part is
``sqrt(sum_{A^T k != 0} |c_k|^2 kernel_r(|A^T k|)^2)``. Only ``k = 0`` is
invariant when ``A`` is invertible, since ``A^T k = 0`` forces ``k = 0``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fourier import annulus_kernel
from .geometry import check_dim, thickness
from .quadrature import Estimate, Product, annulus_mean

DET_GUARD = 1e-9


@dataclass(frozen=True)
class TorusSystem:
    """Action ``t -> (w -> w + A t mod 1)`` of R^d on the d-torus."""

    matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise DomainError(f"flow matrix must be square, got shape {A.shape}")
        check_dim(A.shape[0])
        if abs(np.linalg.det(A)) < DET_GUARD:
            raise DomainError("flow matrix must be invertible (|det A| >= 1e-9)")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d))

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
        return cls(np.array(rows))

    @property
    def d(self):
        return self.matrix.shape[0]

    def act(self, w, t):
        """``T_t w``; broadcasts over leading axes of ``w`` and ``t``."""
        w = np.asarray(w, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.mod(w + t @ self.matrix.T, 1.0)

    def frequency(self, k):
        """``A^T k``, the frequency seen by the character ``e(k . w)`` along the flow."""
        return self.matrix.T @ np.asarray(k, dtype=float)


@dataclass(frozen=True)
class TrigPoly:
    """Finite sum ``sum_k c_k exp(2 pi i k . w)`` on the d-torus."""

    coeffs: dict

    def __post_init__(self):
        clean = {}
        for k, c in dict(self.coeffs).items():
            key = tuple(int(v) for v in np.atleast_1d(k))
            clean[key] = clean.get(key, 0) + complex(c)
        if not clean:
            raise DomainError("a trigonometric polynomial needs at least one term")
        dims = {len(k) for k in clean}
        if len(dims) != 1:
            raise DomainError("all frequencies must have the same dimension")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def wave(cls, k, c=1.0):
        return cls({tuple(k): c})

    @classmethod
    def from_csv(cls, path):
        """Read rows ``k1,...,kd,re,im`` (a header line is skipped if present)."""
        coeffs = {}
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    vals = [float(v) for v in row]
                except ValueError:
                    continue
                *k, re, im = vals
                key = tuple(int(v) for v in k)
                coeffs[key] = coeffs.get(key, 0) + complex(re, im)
        return cls(coeffs)

    @property
    def d(self):
        return len(next(iter(self.coeffs)))

    @property
    def mean(self):
        """Invariant part for an ergodic flow: the constant coefficient."""
        return self.coeffs.get((0,) * self.d, 0j)

    def is_real(self):
        return all(
            abs(c - np.conj(self.coeffs.get(tuple(-v for v in k), 0))) < 1e-14
            for k, c in self.coeffs.items()
        )

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        ks = np.array(list(self.coeffs), dtype=float)
        cs = np.array(list(self.coeffs.values()))
        return np.exp(2j * math.pi * (w @ ks.T)) @ cs


def _kernel(system, k, r, e):
    z = system.frequency(k)
    if system.d == 1:
        return annulus_kernel(1, r, e, float(z[0]))
    return annulus_kernel(system.d, r, e, float(np.linalg.norm(z)))


def _check(system, phi):
    if phi.d != system.d:
        raise DomainError(f"polynomial lives on T^{phi.d}, flow acts on T^{system.d}")


def flow_average(system, phi, omega, r, fn, scheme=None, stream=0):
    """Quadrature estimate of ``avg_r phi(omega)`` along the flow.

    Returns a complex ``Estimate``.
    """
    _check(system, phi)
    omega = np.asarray(omega, dtype=float)
    e, _ = thickness(fn, r)
    if len(phi.coeffs) == 1 and phi.mean != 0:
        return Estimate(phi.mean, 0.0)

    def g(t):
        return phi(system.act(omega, t))

    return annulus_mean(g, np.zeros(system.d), r, e, scheme=scheme or Product(), stream=stream)


def spectral_average(system, phi, omega, r, fn):
    """Exact ``avg_r phi(omega)`` from the annulus kernel (to kernel tolerance)."""
    _check(system, phi)
    omega = np.asarray(omega, dtype=float)
    e, _ = thickness(fn, r)
    total = 0j
    for k, c in phi.coeffs.items():
        if c == 0:
            continue
        char = np.exp(2j * math.pi * np.dot(k, omega))
        total += c * char * _kernel(system, k, r, e)
    return complex(total)


def mean_l2_error(system, phi, r, fn):
    """``|| avg_r phi - mean(phi) ||_2`` over the torus, by orthogonality of characters."""
    _check(system, phi)
    e, _ = thickness(fn, r)
    total = 0.0
    for k, c in phi.coeffs.items():
        if any(k) and c != 0:
            total += abs(c) ** 2 * _kernel(system, k, r, e) ** 2
    return math.sqrt(total)
