# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


def banded_matvec(const double complex[::1] d0, const double complex[::1] d1,
                  const double complex[::1] d2, const double complex[::1] x):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t n2 = d2.shape[0]
    cdef Py_ssize_t i
    cdef double yr, yi, ar, ai, xr, xi
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] y = out
    # explicit real arithmetic: C complex products go through the slow
    # NaN-safe __muldc3 path
    for i in range(n):
        ar, ai, xr, xi = d0[i].real, d0[i].imag, x[i].real, x[i].imag
        yr = ar * xr - ai * xi
        yi = ar * xi + ai * xr
        if i + 1 < n:
            ar, ai, xr, xi = d1[i].real, d1[i].imag, x[i + 1].real, x[i + 1].imag
            yr += ar * xr - ai * xi
            yi += ar * xi + ai * xr
        if i >= 1:
            ar, ai, xr, xi = d1[i - 1].real, -d1[i - 1].imag, x[i - 1].real, x[i - 1].imag
            yr += ar * xr - ai * xi
            yi += ar * xi + ai * xr
        if i < n2:
            ar, ai, xr, xi = d2[i].real, d2[i].imag, x[i + 2].real, x[i + 2].imag
            yr += ar * xr - ai * xi
            yi += ar * xi + ai * xr
        if 2 <= i < n2 + 2:
            ar, ai, xr, xi = d2[i - 2].real, -d2[i - 2].imag, x[i - 2].real, x[i - 2].imag
            yr += ar * xr - ai * xi
            yi += ar * xi + ai * xr
        y[i].real = yr
        y[i].imag = yi
    return out


cdef inline double _cn(const double* m, const double* K, double N,
                       double nx, double ny, double nz) nogil:
    cdef double s1 = m[0] * nx + m[1] * ny + m[2] * nz
    cdef double s2 = (K[0] * nx * nx + K[4] * ny * ny + K[8] * nz * nz
                      + 2.0 * (K[1] * nx * ny + K[2] * nx * nz + K[5] * ny * nz))
    cdef double a = N * (N - 2.0) + 4.0 * s2
    cdef double b = 4.0 * (N - 1.0) * s1
    cdef double rad = a * a - b * b
    if rad < 0.0:
        rad = 0.0
    return (N * N - 4.0 * s2 - sqrt(rad)) / (2.0 * N * (N - 1.0))


def directional_values(mean, K, N, dirs):
    cdef const double[::1] m = np.ascontiguousarray(mean, dtype=np.float64)
    cdef const double[::1] k = np.ascontiguousarray(K, dtype=np.float64).ravel()
    cdef const double[:, ::1] d = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double NN = N
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = _cn(&m[0], &k[0], NN, d[i, 0], d[i, 1], d[i, 2])
    return out


cdef struct Chart:
    double n0[3]
    double e1[3]
    double e2[3]


cdef inline double _chart_value(const Chart* c, const double* m, const double* K,
                                double N, double a, double b, double* out) nogil:
    cdef double v0 = c.n0[0] + a * c.e1[0] + b * c.e2[0]
    cdef double v1 = c.n0[1] + a * c.e1[1] + b * c.e2[1]
    cdef double v2 = c.n0[2] + a * c.e1[2] + b * c.e2[2]
    cdef double r = sqrt(v0 * v0 + v1 * v1 + v2 * v2)
    v0 /= r
    v1 /= r
    v2 /= r
    if out != NULL:
        out[0] = v0
        out[1] = v1
        out[2] = v2
    return -_cn(m, K, N, v0, v1, v2)


def refine_direction(mean, K, N, n0, double step, double xatol, int maxiter):
    cdef const double[::1] m = np.ascontiguousarray(mean, dtype=np.float64)
    cdef const double[::1] k = np.ascontiguousarray(K, dtype=np.float64).ravel()
    cdef double NN = N
    cdef Chart c
    base = np.asarray(n0, dtype=np.float64)
    base = base / np.linalg.norm(base)
    helper = np.array([1.0, 0.0, 0.0]) if abs(base[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(base, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(base, e1)
    cdef int j
    for j in range(3):
        c.n0[j] = base[j]
        c.e1[j] = e1[j]
        c.e2[j] = e2[j]

    # standard Nelder-Mead coefficients
    cdef double px[3]
    cdef double py[3]
    cdef double fv[3]
    cdef double xr, yr, fr, xe, ye, fe, xc, yc, fc, cx, cy, size
    cdef int it, i, lo, hi, mid, tmp
    px[0] = 0.0; py[0] = 0.0
    px[1] = step; py[1] = 0.0
    px[2] = 0.0; py[2] = step
    with nogil:
        for i in range(3):
            fv[i] = _chart_value(&c, &m[0], &k[0], NN, px[i], py[i], NULL)
        for it in range(maxiter):
            lo = 0; mid = 1; hi = 2
            if fv[lo] > fv[mid]:
                tmp = lo; lo = mid; mid = tmp
            if fv[mid] > fv[hi]:
                tmp = mid; mid = hi; hi = tmp
            if fv[lo] > fv[mid]:
                tmp = lo; lo = mid; mid = tmp
            size = fabs(px[hi] - px[lo]) + fabs(py[hi] - py[lo])
            if fabs(px[mid] - px[lo]) + fabs(py[mid] - py[lo]) > size:
                size = fabs(px[mid] - px[lo]) + fabs(py[mid] - py[lo])
            if size < xatol and fv[hi] - fv[lo] < 1e-15:
                break
            cx = 0.5 * (px[lo] + px[mid])
            cy = 0.5 * (py[lo] + py[mid])
            xr = 2.0 * cx - px[hi]
            yr = 2.0 * cy - py[hi]
            fr = _chart_value(&c, &m[0], &k[0], NN, xr, yr, NULL)
            if fr < fv[lo]:
                xe = 3.0 * cx - 2.0 * px[hi]
                ye = 3.0 * cy - 2.0 * py[hi]
                fe = _chart_value(&c, &m[0], &k[0], NN, xe, ye, NULL)
                if fe < fr:
                    px[hi] = xe; py[hi] = ye; fv[hi] = fe
                else:
                    px[hi] = xr; py[hi] = yr; fv[hi] = fr
            elif fr < fv[mid]:
                px[hi] = xr; py[hi] = yr; fv[hi] = fr
            else:
                if fr < fv[hi]:
                    xc = cx + 0.5 * (xr - cx)
                    yc = cy + 0.5 * (yr - cy)
                else:
                    xc = cx + 0.5 * (px[hi] - cx)
                    yc = cy + 0.5 * (py[hi] - cy)
                fc = _chart_value(&c, &m[0], &k[0], NN, xc, yc, NULL)
                if fc < fv[hi] and fc <= fr:
                    px[hi] = xc; py[hi] = yc; fv[hi] = fc
                else:
                    for i in range(3):
                        if i != lo:
                            px[i] = px[lo] + 0.5 * (px[i] - px[lo])
                            py[i] = py[lo] + 0.5 * (py[i] - py[lo])
                            fv[i] = _chart_value(&c, &m[0], &k[0], NN, px[i], py[i], NULL)
        lo = 0
        for i in range(1, 3):
            if fv[i] < fv[lo]:
                lo = i
    cdef double nv[3]
    cdef double best = _chart_value(&c, &m[0], &k[0], NN, px[lo], py[lo], nv)
    return np.array([nv[0], nv[1], nv[2]]), -best
