# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_kernels_py`` function for function."""

import numpy as np

from libc.math cimport sqrt, sin, cos, sinh, cosh, fabs, ceil

cdef enum:
    NTERMS = 8

cdef double SERIES_THRESHOLD = 1e-4

cdef double[NTERMS] COS_COEF
cdef double[NTERMS] SINC_COEF


cdef void _init_coefficients():
    cdef int k
    cdef double fact = 1.0
    COS_COEF[0] = 1.0
    SINC_COEF[0] = 1.0
    for k in range(1, NTERMS):
        fact *= (2 * k - 1) * (2 * k)
        COS_COEF[k] = 1.0 / fact
        SINC_COEF[k] = 1.0 / (fact * (2 * k + 1))


_init_coefficients()


cdef inline void _kernel(double x, double t, double* c, double* s) noexcept nogil:
    cdef double y = x * t * t
    cdef double cs = 0.0, ss = 0.0, r
    cdef int k
    if fabs(y) < SERIES_THRESHOLD:
        for k in range(NTERMS - 1, -1, -1):
            cs = cs * (-y) + COS_COEF[k]
            ss = ss * (-y) + SINC_COEF[k]
        c[0] = cs
        s[0] = ss * t
    elif x > 0.0:
        r = sqrt(x)
        c[0] = cos(r * t)
        s[0] = sin(r * t) / r
    else:
        r = sqrt(-x)
        c[0] = cosh(r * t)
        s[0] = sinh(r * t) / r


def trig_kernels(double x, times):
    cdef double[::1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0], i
    c_arr = np.empty(n, dtype=np.float64)
    s_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] c = c_arr
    cdef double[::1] s = s_arr
    with nogil:
        for i in range(n):
            _kernel(x, t[i], &c[i], &s[i])
    return c_arr, s_arr


def propagator_grid(double w1, double w2, double w, double delta,
                    double wp_sq, double wm_sq, times):
    cdef double[::1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0], i
    u_arr = np.zeros((n, 2, 2), dtype=np.complex128)
    v_arr = np.zeros((n, 2, 2), dtype=np.complex128)
    cdef double complex[:, :, ::1] u = u_arr
    cdef double complex[:, :, ::1] v = v_arr
    cdef double complex I = 1j
    cdef double cp, sp, cm, sm, dc
    cdef double scale, lp, lm, total, g1, kvv, d1, d2, bp, bm
    cdef double complex u12, v12

    if n == 0:
        return u_arr, v_arr
    if delta == 0.0:
        for i in range(n):
            u[i, 0, 0] = cos(w1 * t[i]) - I * sin(w1 * t[i])
            u[i, 1, 1] = u[i, 0, 0]
        return u_arr, v_arr

    scale = w / (2.0 * sqrt(w1 * w2))
    lp = scale * (w1 + w2)
    lm = scale * (w1 - w2)
    total = w1 * w1 + w2 * w2
    g1 = (w1 * w1 - w2 * w2) / (2.0 * delta)
    kvv = w1 * w2 * lp * lm / delta
    d1 = g1 + w * w * (2.0 * w1 * w1 + total) / (2.0 * delta * w1 * w1)
    d2 = -g1 + w * w * (2.0 * w2 * w2 + total) / (2.0 * delta * w2 * w2)
    bp = (w1 + w2) * (w1 + w2) / (2.0 * delta)
    bm = (w1 - w2) * (w1 - w2) / (2.0 * delta)

    with nogil:
        for i in range(n):
            _kernel(wp_sq, t[i], &cp, &sp)
            _kernel(wm_sq, t[i], &cm, &sm)
            u[i, 0, 0] = 0.5 * ((1.0 + g1) * cp + (1.0 - g1) * cm
                                - I * w1 * ((1.0 + d1) * sp + (1.0 - d1) * sm))
            u[i, 1, 1] = 0.5 * ((1.0 - g1) * cp + (1.0 + g1) * cm
                                - I * w2 * ((1.0 + d2) * sp + (1.0 - d2) * sm))
            v[i, 0, 0] = I * (kvv / w1) * (sp - sm)
            v[i, 1, 1] = -I * (kvv / w2) * (sp - sm)
            dc = cp - cm
            u12 = 0.5 * lp * ((1.0 + bp) * sp + (1.0 - bp) * sm + I * ((w1 + w2) / delta) * dc)
            v12 = 0.5 * lm * ((1.0 + bm) * sp + (1.0 - bm) * sm + I * ((w1 - w2) / delta) * dc)
            u[i, 0, 1] = u12
            u[i, 1, 0] = -u12
            v[i, 0, 1] = v12
            v[i, 1, 0] = v12.real - I * v12.imag
    return u_arr, v_arr


cdef inline void _matmul4(double complex* a, double complex* b, double complex* out) noexcept nogil:
    cdef int r, c, k
    cdef double complex acc
    for r in range(4):
        for c in range(4):
            acc = 0.0
            for k in range(4):
                acc = acc + a[4 * r + k] * b[4 * k + c]
            out[4 * r + c] = acc


def rk4_grid(h, times, double dt):
    cdef double complex[:, ::1] hm = np.ascontiguousarray(h, dtype=np.complex128)
    cdef double[::1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0], idx
    out_arr = np.empty((n, 4, 4), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_arr
    cdef double complex a[16]
    cdef double complex w[16]
    cdef double complex tmp[16]
    cdef double complex k1[16]
    cdef double complex k2[16]
    cdef double complex k3[16]
    cdef double complex k4[16]
    cdef double now = 0.0, span, step, half
    cdef long steps, s
    cdef int e, r, c

    for r in range(4):
        for c in range(4):
            a[4 * r + c] = -1j * hm[r, c]
            w[4 * r + c] = 1.0 if r == c else 0.0

    with nogil:
        for idx in range(n):
            span = t[idx] - now
            if span > 0.0:
                steps = <long> ceil(span / dt - 1e-9)
                if steps < 1:
                    steps = 1
                step = span / steps
                half = 0.5 * step
                for s in range(steps):
                    _matmul4(a, w, k1)
                    for e in range(16):
                        tmp[e] = w[e] + half * k1[e]
                    _matmul4(a, tmp, k2)
                    for e in range(16):
                        tmp[e] = w[e] + half * k2[e]
                    _matmul4(a, tmp, k3)
                    for e in range(16):
                        tmp[e] = w[e] + step * k3[e]
                    _matmul4(a, tmp, k4)
                    for e in range(16):
                        w[e] = w[e] + (step / 6.0) * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e])
                now = t[idx]
            for r in range(4):
                for c in range(4):
                    out[idx, r, c] = w[4 * r + c]
    return out_arr
