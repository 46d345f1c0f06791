import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from annuli.errors import DomainError
from annuli.fourier import (
    KernelQuery,
    annulus_kernel,
    ball_kernel_3d,
    decay_scan,
    kernel_1d,
    kernel_modulus_phase,
)
from annuli.geometry import Ball, PowerLaw, shell_power_difference
from annuli.quadrature import MonteCarlo, annulus_mean
from annuli.specfun import sphere_fourier

geometry = st.tuples(st.integers(1, 6), st.floats(0.01, 100.0), st.floats(1e-6, 1.0))


@given(geometry)
def test_normalization(args):
    d, r, frac = args
    assert annulus_kernel(d, r, frac * r, 0.0) == 1.0


@given(st.integers(2, 5), st.floats(0.05, 30.0), st.floats(1e-3, 1.0), st.floats(0.0, 20.0))
def test_kernel_bounded(d, r, frac, s):
    assert abs(annulus_kernel(d, r, frac * r, s)) <= 1.0 + 1e-9


def test_ball_kernel_3d():
    val = annulus_kernel(3, 1.0, 1.0, 1.0)
    assert val == pytest.approx(-3 / (4 * math.pi**2), abs=1e-12)
    assert ball_kernel_3d(1.0) == pytest.approx(-3 / (4 * math.pi**2), abs=1e-15)
    assert ball_kernel_3d(0.0) == 1.0


def test_ball_kernel_3d_monte_carlo():
    est = annulus_mean(lambda t: np.cos(2 * np.pi * t[:, 0]), np.zeros(3), 1.0, 1.0, scheme=MonteCarlo(10**6, 4))
    assert abs(est.value - annulus_kernel(3, 1.0, 1.0, 1.0)) <= 4 * est.error


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_disk_kernel_closed_form_and_monte_carlo(r):
    u = 2 * math.pi * r
    closed = 2 * special.j1(u) / u
    assert annulus_kernel(2, r, r, 1.0) == pytest.approx(closed, abs=1e-9)
    est = annulus_mean(lambda t: np.cos(2 * np.pi * t[:, 0]), np.zeros(2), r, r, scheme=MonteCarlo(10**6, 8))
    assert abs(est.value - closed) <= 4 * est.error


def test_thin_annulus_collapses_to_sphere():
    assert annulus_kernel(2, 5.0, 5e-9, 1.0) == pytest.approx(sphere_fourier(2, 5.0), abs=1e-7)
    assert sphere_fourier(2, 5.0) == pytest.approx(special.j0(10 * math.pi), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("r, e, s", [(1.0, 0.5, 1.3), (20.0, 3.0, 1.0), (300.0, 17.3, 0.7)])
def test_mixture_consistency(d, r, e, s):
    whole = annulus_kernel(d, r, e, s)
    outer = annulus_kernel(d, r, e / 2, s)
    inner = annulus_kernel(d, r - e / 2, e / 2, s)
    w_out = shell_power_difference(d, r, e / 2)
    w_in = shell_power_difference(d, r - e / 2, e / 2)
    assert whole == pytest.approx((w_out * outer + w_in * inner) / (w_out + w_in), abs=1e-7)


@given(st.floats(0.01, 50.0), st.floats(-20.0, 20.0))
def test_interval_kernel_when_ball(r, z):
    u = 2 * math.pi * z * r
    expected = 1.0 if u == 0 else math.sin(u) / u
    assert kernel_1d(r, r, z) == pytest.approx(expected, abs=1e-12)


@given(st.floats(0.1, 50.0), st.floats(0.01, 1.0), st.floats(-10.0, 10.0))
def test_kernel_1d_matches_difference_form(r, frac, z):
    e = frac * r
    if abs(z) < 1e-6:
        return
    direct = (math.sin(2 * math.pi * z * r) - math.sin(2 * math.pi * z * (r - e))) / (2 * math.pi * z * e)
    assert kernel_1d(r, e, z) == pytest.approx(direct, abs=1e-9)
    assert kernel_1d(r, e, z) == kernel_1d(r, e, -z)


def test_kernel_1d_monte_carlo():
    est = annulus_mean(lambda t: np.cos(2 * np.pi * 0.37 * t[:, 0]), np.zeros(1), 3.0, 1.2, scheme=MonteCarlo(10**6, 2))
    assert abs(est.value - kernel_1d(3.0, 1.2, 0.37)) <= 4 * est.error


def test_modulus_phase():
    mod, phase = kernel_modulus_phase(1.0, 1.0, 0.75)
    val = kernel_1d(1.0, 1.0, 0.75)
    assert mod == abs(val) and phase == (math.pi if val < 0 else 0.0)


def test_kernel_error_estimate():
    val, err = annulus_kernel(3, 500.0, 20.0, 1.0, with_error=True)
    assert err <= 1e-8 * max(abs(val), 1e-6)
    assert annulus_kernel(3, 500.0, 20.0, 0.0, with_error=True) == (1.0, 0.0)


def test_query_validation():
    with pytest.raises(DomainError):
        KernelQuery(2, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        KernelQuery(2, 1.0, 0.5, -1.0)
    with pytest.raises(DomainError):
        annulus_kernel(11, 1.0, 0.5, 1.0)
    KernelQuery(1, 1.0, 0.5, -1.0)


def test_decay_scan_shape_and_values():
    rows = decay_scan(2, Ball(), 1.0, [1.0, 2.0, 3.0])
    assert [row[0] for row in rows] == [1.0, 2.0, 3.0]
    for r, e, s, val in rows:
        assert e == r and s == 1.0
        assert val == pytest.approx(2 * special.j1(2 * math.pi * r) / (2 * math.pi * r), abs=1e-9)


def test_decay_scan_rejects():
    with pytest.raises(DomainError):
        decay_scan(2, Ball(), 0.0, [1.0])
    with pytest.raises(DomainError):
        decay_scan(2, Ball(), 1.0, [2.0, 1.0])
    with pytest.raises(DomainError):
        decay_scan(2, Ball(), 1.0, [])


def test_decay_3d_power_law_short_window():
    rows = decay_scan(3, PowerLaw(1.0, 0.5), 1.0, np.linspace(9990.0, 10000.0, 41))
    assert max(abs(v) for *_, v in rows) <= 0.05


def test_dimension_one_no_decay():
    r = np.linspace(1000.0, 1008.0, 3201)
    const = np.max(np.abs(kernel_1d(r, 1.0, 0.25)))
    bound = 2 * abs(math.sin(math.pi / 4)) / (math.pi / 2) * 0.5 * 0.9
    assert const >= bound
    grows = max(abs(v) for *_, v in decay_scan(1, PowerLaw(1.0, 0.5), 0.25, r))
    assert grows <= 0.05
