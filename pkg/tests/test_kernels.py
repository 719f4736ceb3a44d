import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotmode import kernels
from rotmode.model import ModelParams, spectrum
from rotmode.propagator import SERIES_THRESHOLD, cos_kernel, sinc_kernel, trig_kernels


@pytest.mark.parametrize(
    "x, t, expected",
    [(0.0, 3.0, 1.0), (math.pi**2, 1.0, -1.0), (-1.0, 1.0, math.cosh(1.0))],
)
def test_cos_kernel_values(x, t, expected):
    assert cos_kernel(x, t) == pytest.approx(expected, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize(
    "x, t, expected",
    [(0.0, 5.0, 5.0), (math.pi**2, 0.5, 1.0 / math.pi), (-4.0, 1.0, math.sinh(2.0) / 2.0)],
)
def test_sinc_kernel_values(x, t, expected):
    assert sinc_kernel(x, t) == pytest.approx(expected, rel=1e-14)


def test_hand_values():
    assert cos_kernel(-1.0, 1.0) == pytest.approx(1.54308, abs=1e-5)
    assert sinc_kernel(-4.0, 1.0) == pytest.approx(1.81343, abs=1e-5)


@given(st.floats(-4.0, 4.0), st.floats(-30.0, 30.0))
def test_kernels_at_zero_time(x, t):
    assert cos_kernel(x, 0.0) == 1.0
    assert sinc_kernel(x, 0.0) == 0.0


@given(st.floats(-1.0, 4.0), st.floats(-10.0, 10.0))
def test_pythagorean_identity(x, t):
    c, s = cos_kernel(x, t), sinc_kernel(x, t)
    assert c * c + x * s * s == pytest.approx(1.0, rel=1e-12 * max(1.0, c * c))


@pytest.mark.parametrize("t", [0.5, 3.0, 40.0])
@pytest.mark.parametrize("side", [-1.0, 1.0])
def test_continuity_at_series_boundary(t, side):
    x_edge = side * SERIES_THRESHOLD / (t * t)
    inside = np.nextafter(x_edge, 0.0)
    outside = np.nextafter(x_edge, side * np.inf)
    assert abs(cos_kernel(inside, t) - cos_kernel(outside, t)) <= 1e-13
    assert abs(sinc_kernel(inside, t) - sinc_kernel(outside, t)) <= 1e-13 * t


def test_no_jump_across_zero():
    t = 7.0
    xs = np.linspace(-1e-3, 1e-3, 2001)
    c = np.array([cos_kernel(x, t) for x in xs])
    s = np.array([sinc_kernel(x, t) for x in xs])
    # smooth in x: second differences are tiny
    assert np.abs(np.diff(c, 2)).max() < 1e-9
    assert np.abs(np.diff(s, 2)).max() < 1e-9


def test_trig_kernels_container():
    p = ModelParams(1.0, 0.5, 0.75)
    k = trig_kernels(p, 2.0)
    spec = spectrum(p)
    assert k.c_minus == pytest.approx(math.cosh(math.sqrt(-spec.omega_minus_sq) * 2.0))
    assert k.c_plus ** 2 + spec.omega_plus_sq * k.s_plus ** 2 == pytest.approx(1.0)


@pytest.mark.parametrize("x", [-2.0, -1e-6, 0.0, 1e-7, 1.3, 25.0])
def test_grid_kernels_match_scalar(backend, x):
    t = np.linspace(-5.0, 50.0, 301)
    c, s = backend.trig_kernels(x, t)
    assert np.allclose(c, [cos_kernel(x, ti) for ti in t], rtol=1e-14, atol=1e-15)
    assert np.allclose(s, [sinc_kernel(x, ti) for ti in t], rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("p", [ModelParams(1.0, 0.5, 0.49), ModelParams(1.0, 0.5, 0.75), ModelParams(1.0, 1.0, 1.0)])
def test_backends_agree(p):
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled extension not built")
    spec = spectrum(p)
    t = np.linspace(0.0, 30.0, 257)
    args = (p.omega1, p.omega2, p.omega, spec.delta, spec.omega_plus_sq, spec.omega_minus_sq, t)
    u_py, v_py = backends["python"].propagator_grid(*args)
    u_cy, v_cy = backends["cython"].propagator_grid(*args)
    assert np.allclose(u_py, u_cy, rtol=1e-13, atol=1e-13)
    assert np.allclose(v_py, v_cy, rtol=1e-13, atol=1e-13)

    from rotmode.oracle import generator

    h = generator(p)
    w_py = backends["python"].rk4_grid(h, t[:40], 1e-2)
    w_cy = backends["cython"].rk4_grid(h, t[:40], 1e-2)
    assert np.allclose(w_py, w_cy, rtol=1e-12, atol=1e-12)


def test_backend_name():
    assert kernels.BACKEND in kernels.available_backends()
