"""Pure-NumPy implementation of the hot kernels.

Used when the compiled ``_kernels_cy`` extension is unavailable, or when
``ROTMODE_PURE_PYTHON=1`` is set. Both modules expose the same functions
with the same signatures.
"""

import math

import numpy as np

SERIES_THRESHOLD = 1e-4
SERIES_TERMS = 8

# 1/(2k)! and 1/(2k+1)!
_COS_COEF = np.array([1.0 / math.factorial(2 * k) for k in range(SERIES_TERMS)])
_SINC_COEF = np.array([1.0 / math.factorial(2 * k + 1) for k in range(SERIES_TERMS)])


def trig_kernels(x, times):
    """Analytically continued ``cos(sqrt(x) t)`` and ``sin(sqrt(x) t)/sqrt(x)``.

    ``x`` is a scalar squared frequency, ``times`` a 1-D float array.
    """
    t = np.asarray(times, dtype=float)
    y = x * t * t
    series = np.abs(y) < SERIES_THRESHOLD
    c = np.empty_like(t)
    s = np.empty_like(t)

    if series.any():
        ys = -y[series]
        cs = np.zeros_like(ys)
        ss = np.zeros_like(ys)
        for k in range(SERIES_TERMS - 1, -1, -1):
            cs = cs * ys + _COS_COEF[k]
            ss = ss * ys + _SINC_COEF[k]
        c[series] = cs
        s[series] = ss * t[series]

    direct = ~series
    if direct.any():
        td = t[direct]
        if x > 0.0:
            r = math.sqrt(x)
            c[direct] = np.cos(r * td)
            s[direct] = np.sin(r * td) / r
        else:
            r = math.sqrt(-x)
            c[direct] = np.cosh(r * td)
            s[direct] = np.sinh(r * td) / r
    return c, s


def propagator_grid(w1, w2, w, delta, wp_sq, wm_sq, times):
    """Closed-form blocks ``U(t)``, ``V(t)`` on a time grid.

    Returns two complex arrays of shape ``(len(times), 2, 2)``.
    """
    t = np.asarray(times, dtype=float)
    n = t.shape[0]
    u = np.zeros((n, 2, 2), dtype=complex)
    v = np.zeros((n, 2, 2), dtype=complex)
    if n == 0:
        return u, v

    cp, sp = trig_kernels(wp_sq, t)
    cm, sm = trig_kernels(wm_sq, t)

    if delta == 0.0:
        # omega = 0, omega1 = omega2: free isotropic evolution
        phase = np.exp(-1j * w1 * t)
        u[:, 0, 0] = phase
        u[:, 1, 1] = phase
        return u, v

    scale = w / (2.0 * math.sqrt(w1 * w2))
    lp = scale * (w1 + w2)
    lm = scale * (w1 - w2)
    total = w1 * w1 + w2 * w2
    g1 = (w1 * w1 - w2 * w2) / (2.0 * delta)
    kvv = w1 * w2 * lp * lm / delta

    for j, (wj, gj) in enumerate(((w1, g1), (w2, -g1))):
        dj = gj + w * w * (2.0 * wj * wj + total) / (2.0 * delta * wj * wj)
        u[:, j, j] = 0.5 * (
            (1.0 + gj) * cp
            + (1.0 - gj) * cm
            - 1j * wj * ((1.0 + dj) * sp + (1.0 - dj) * sm)
        )
        sign = 1.0 if j == 0 else -1.0
        v[:, j, j] = 1j * sign * (kvv / wj) * (sp - sm)

    dc = cp - cm
    bp = (w1 + w2) ** 2 / (2.0 * delta)
    bm = (w1 - w2) ** 2 / (2.0 * delta)
    u12 = 0.5 * lp * ((1.0 + bp) * sp + (1.0 - bp) * sm + 1j * ((w1 + w2) / delta) * dc)
    v12 = 0.5 * lm * ((1.0 + bm) * sp + (1.0 - bm) * sm + 1j * ((w1 - w2) / delta) * dc)
    u[:, 0, 1] = u12
    u[:, 1, 0] = -u12
    v[:, 0, 1] = v12
    v[:, 1, 0] = np.conj(v12)
    return u, v


def _step_count(span, dt):
    if span <= 0.0:
        return 0
    return max(1, math.ceil(span / dt - 1e-9))


def rk4_grid(h, times, dt):
    """Classical fixed-step RK4 for ``i dW/dt = h W``, ``W(0) = I``.

    ``times`` must be sorted ascending and nonnegative. Each interval between
    consecutive output times is split into equal steps no longer than ``dt``.
    Returns an array of shape ``(len(times), 4, 4)``.
    """
    a = -1j * np.asarray(h, dtype=complex)
    t = np.asarray(times, dtype=float)
    out = np.empty((t.shape[0], 4, 4), dtype=complex)
    state = np.eye(4, dtype=complex)
    now = 0.0
    for idx, target in enumerate(t):
        steps = _step_count(target - now, dt)
        if steps:
            step = (target - now) / steps
            half = 0.5 * step
            for _ in range(steps):
                k1 = a @ state
                k2 = a @ (state + half * k1)
                k3 = a @ (state + half * k2)
                k4 = a @ (state + step * k3)
                state = state + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            now = target
        out[idx] = state
    return out
