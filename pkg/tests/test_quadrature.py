import math

import numpy as np
import pytest
from scipy.integrate import quad

from digs.errors import QuadratureError
from digs.quadrature import W_GAUSS, W_KRONROD, gk15, integrate


def test_weights_integrate_constants():
    assert W_KRONROD.sum() == pytest.approx(2.0)
    assert W_GAUSS.sum() == pytest.approx(2.0)


def test_single_panel_is_exact_for_polynomials():
    v, e = gk15(lambda x: x ** 20, -1.0, 1.0)
    assert v == pytest.approx(2.0 / 21.0, rel=1e-13)


def test_exponential():
    v, e = integrate(np.exp, 0.0, 3.0, rel_tol=1e-12)
    assert v == pytest.approx(math.exp(3.0) - 1.0, rel=1e-12)
    assert e <= 1e-12 * abs(v)


def test_narrow_complex_lorentzian():
    w = 1e-4
    f = lambda x: 1.0 / (x - 0.3 + 1j * w)
    v, _ = integrate(f, -1.0, 1.0, breakpoints=[0.3], rel_tol=1e-10)
    ref = complex(quad(lambda x: f(x).real, -1, 1, points=[0.3], limit=500)[0],
                  quad(lambda x: f(x).imag, -1, 1, points=[0.3], limit=500)[0])
    assert abs(v - ref) < 1e-8 * abs(ref)


def test_breakpoints_outside_are_ignored():
    v, _ = integrate(np.cos, 0.0, 1.0, breakpoints=[-5.0, 0.0, 7.0])
    assert v == pytest.approx(math.sin(1.0), rel=1e-10)


def test_empty_interval():
    assert integrate(np.exp, 1.0, 1.0) == (0.0, 0.0)


def test_failure_reports_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: 1.0 / np.sqrt(np.abs(x - 0.123456)), 0.0, 1.0, rel_tol=1e-14, max_depth=3)
    assert np.isfinite(info.value.estimate) and info.value.error > 0
