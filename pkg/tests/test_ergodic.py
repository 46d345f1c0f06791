import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annuli.errors import DomainError
from annuli.ergodic import TorusSystem, TrigPoly, flow_average, mean_l2_error, spectral_average
from annuli.fourier import annulus_kernel
from annuli.geometry import Ball, Constant, PowerLaw, Proportional, thickness
from annuli.quadrature import MonteCarlo, Product

I2 = TorusSystem.identity(2)
WAVE = TrigPoly.wave((1, 0))


def test_system_validation():
    with pytest.raises(DomainError):
        TorusSystem(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(DomainError):
        TorusSystem(np.ones((2, 3)))
    with pytest.raises(DomainError):
        TorusSystem(np.array([[1e-10]]))
    assert TorusSystem(np.array([[0.25]])).d == 1


def test_system_from_csv(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1,0.5\n0,2\n")
    sys_ = TorusSystem.from_csv(path)
    assert np.array_equal(sys_.matrix, [[1.0, 0.5], [0.0, 2.0]])
    assert np.allclose(sys_.frequency((1, 1)), [1.0, 2.5])


def test_poly_from_csv(tmp_path):
    path = tmp_path / "phi.csv"
    path.write_text("k1,k2,re,im\n1,0,0.5,0\n-1,0,0.5,0\n0,0,2,0\n")
    phi = TrigPoly.from_csv(path)
    assert phi.d == 2 and phi.mean == 2 and phi.is_real()
    assert phi(np.array([0.0, 0.3])) == pytest.approx(3.0)
    assert not TrigPoly.wave((1, 0)).is_real()


def test_poly_validation():
    with pytest.raises(DomainError):
        TrigPoly({})
    with pytest.raises(DomainError):
        TrigPoly({(1,): 1.0, (1, 0): 1.0})
    with pytest.raises(DomainError):
        flow_average(I2, TrigPoly.wave((1,)), [0.0], 1.0, Ball())


def test_constant_observable():
    one = TrigPoly({(0, 0): 1.0})
    assert flow_average(I2, one, [0.3, 0.2], 5.0, Ball()).value == 1.0
    assert spectral_average(I2, one, [0.3, 0.2], 5.0, Ball()) == 1.0
    assert mean_l2_error(I2, one, 7.0, Constant(0.1)) == 0.0


def test_zero_frequency_is_invariant_part():
    phi = TrigPoly({(0, 0): 0.7 - 0.2j, (2, 1): 0.4})
    for r in (0.5, 3.0, 40.0):
        val = spectral_average(I2, phi, [0.1, 0.9], r, Ball())
        assert abs(val - (0.7 - 0.2j)) <= 0.4 * abs(annulus_kernel(2, r, r, math.sqrt(5))) + 1e-12
    assert phi.mean == 0.7 - 0.2j


def test_single_wave_identity():
    omega = np.array([0.3, 0.7])
    for r in (0.5, 2.0, 4.5):
        est = flow_average(I2, WAVE, omega, r, PowerLaw(1.0, 0.5), Product(48, 256))
        exact = cmath.exp(2j * math.pi * omega[0]) * annulus_kernel(2, r, thickness(PowerLaw(1.0, 0.5), r).e, 1.0)
        assert abs(est.value - exact) <= 4 * est.error + 1e-9
        assert spectral_average(I2, WAVE, omega, r, PowerLaw(1.0, 0.5)) == pytest.approx(exact, abs=1e-12)


def test_mean_zero_over_torus_grid():
    g = (np.arange(32) + 0.5) / 32
    total, err = 0.0, 0.0
    phi = TrigPoly.wave((2, 1))
    for w1 in g:
        for w2 in g:
            est = flow_average(I2, phi, [w1, w2], 1.3, Constant(0.4))
            total += est.value.real
            err += est.error
    assert abs(total / 1024) <= err / 1024 + 1e-12


def test_flow_vs_spectral_random(rng):
    for i in range(6):
        coeffs = {tuple(rng.integers(-2, 3, 2)): complex(*rng.normal(size=2)) for _ in range(3)}
        phi = TrigPoly(coeffs)
        omega = rng.random(2)
        r = rng.uniform(0.3, 3.0)
        est = flow_average(I2, phi, omega, r, Proportional(0.5), MonteCarlo(100_000, i))
        assert abs(est.value - spectral_average(I2, phi, omega, r, Proportional(0.5))) <= 4 * est.error


def test_flow_vs_spectral_general_matrix():
    A = np.array([[1.0, 0.3], [-0.2, 0.8]])
    sys_ = TorusSystem(A)
    phi = TrigPoly({(1, 1): 0.5, (0, 2): 0.25j})
    est = flow_average(sys_, phi, [0.2, 0.4], 1.7, Constant(0.6), Product(64, 256))
    assert abs(est.value - spectral_average(sys_, phi, [0.2, 0.4], 1.7, Constant(0.6))) <= 4 * est.error + 1e-9


def test_group_law_exact_on_dyadics():
    sys_ = TorusSystem(np.array([[1.0, 0.5], [0.25, 2.0]]))
    w = np.array([0.375, 0.8125])
    t = np.array([1.5, -2.25])
    s = np.array([0.125, 3.0])
    assert np.array_equal(sys_.act(sys_.act(w, t), s), sys_.act(w, t + s))


@given(st.lists(st.floats(-50, 50), min_size=4, max_size=4), st.lists(st.floats(0, 1), min_size=2, max_size=2))
def test_group_law_round_off(ts, w):
    sys_ = TorusSystem(np.array([[1.0, 0.3], [-0.2, 0.8]]))
    t, s = np.array(ts[:2]), np.array(ts[2:])
    a = sys_.act(sys_.act(np.array(w), t), s)
    b = sys_.act(np.array(w), t + s)
    gap = np.abs(a - b)
    assert np.all(np.minimum(gap, 1 - gap) <= 1e-12)


def test_measure_preservation(rng):
    sys_ = TorusSystem(np.array([[1.0, 0.3], [-0.2, 0.8]]))
    n = 200_000
    for _ in range(5):
        lo = rng.random(2) * 0.5
        hi = lo + rng.uniform(0.1, 0.5, 2)
        t = rng.normal(scale=10, size=2)
        w = rng.random((n, 2))
        moved = sys_.act(w, t)
        p = np.mean(np.all((moved >= lo) & (moved < hi), axis=1))
        exact = float(np.prod(hi - lo))
        assert abs(p - exact) <= 4 * math.sqrt(exact * (1 - exact) / n)


def test_mean_ergodic_decay_2d():
    assert mean_l2_error(I2, WAVE, 1e4, PowerLaw(1.0, 0.5)) <= 0.05


@pytest.mark.parametrize("fn", [Ball(), Proportional(0.5), PowerLaw(1.0, 0.5)])
def test_mean_ergodic_growing_thickness(fn):
    phi = TrigPoly({(1, 0): 0.5, (0, 1): 0.5, (1, 1): 0.25j, (0, 0): 1.0})
    errs = [mean_l2_error(I2, phi, r, fn) for r in (10.0, 1e2, 1e3, 1e4)]
    assert errs[-1] <= 0.05


def test_dimension_one_bounded_thickness_fails():
    # frequency 1/4 seen by the flow: A = (1/4), k = 1
    sys_ = TorusSystem(np.array([[0.25]]))
    phi = TrigPoly.wave((1,))
    r = np.linspace(1000.0, 1008.0, 801)
    sup_const = max(mean_l2_error(sys_, phi, v, Constant(1.0)) for v in r)
    sup_pow = max(mean_l2_error(sys_, phi, v, PowerLaw(1.0, 0.5)) for v in r)
    assert sup_const >= 0.1
    assert sup_pow <= 0.05
    spectral = max(abs(spectral_average(sys_, phi, [0.0], v, Constant(1.0))) for v in r)
    assert spectral > 0.1


def test_dimension_one_integer_frequency_unit_window_vanishes():
    # a window of length 1 holds whole periods of an integer frequency: the
    # kernel is exactly zero, so this pairing cannot witness the failure
    sys_ = TorusSystem.identity(1)
    phi = TrigPoly.wave((1,))
    assert max(mean_l2_error(sys_, phi, v, Constant(1.0)) for v in np.linspace(1000, 1008, 81)) < 1e-12


def test_flow_average_dimension_one():
    sys_ = TorusSystem(np.array([[0.25]]))
    phi = TrigPoly({(1,): 1.0, (-1,): 0.5})
    est = flow_average(sys_, phi, [0.2], 3.3, Constant(1.0))
    assert abs(est.value - spectral_average(sys_, phi, [0.2], 3.3, Constant(1.0))) <= 4 * est.error + 1e-12
