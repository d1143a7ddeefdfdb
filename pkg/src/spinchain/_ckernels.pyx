# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Miller downward recurrence and cyclic Jacobi.

Same algorithms as ``_kernels_py``; keep the two in step.
"""

from libc.math cimport sqrt, ceil, fabs

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double complex conj(double complex)

cdef double _BIG = 1.0e250
cdef double _SMALL_X = 1.0e-6


cdef int _start(int n_max, double x) noexcept nogil:
    cdef int top = n_max
    cdef int cx = <int>ceil(x)
    if cx > top:
        top = cx
    return top + <int>ceil(10.0 * sqrt(<double>top)) + 40


def miller_start(int n_max, double x):
    """Starting order for the downward recurrence."""
    return _start(n_max, x)


def bessel_row(int n_max, double x, double[::1] out):
    _bessel_row(n_max, x, out)


cdef void _bessel_row(int n_max, double x, double[::1] out) noexcept nogil:
    cdef int k, q, start
    cdef double h, h2, lead, two_over_x, j_next, j_cur, j_prev, norm, scale
    for k in range(n_max + 1):
        out[k] = 0.0
    if x == 0.0:
        out[0] = 1.0
        return
    if x < _SMALL_X:
        h = 0.5 * x
        h2 = h * h
        lead = 1.0
        for k in range(n_max + 1):
            if k > 0:
                lead *= h / k
                if lead == 0.0:
                    break
            out[k] = lead * (1.0 - h2 / (k + 1) + h2 * h2 / (2.0 * (k + 1) * (k + 2)))
        return

    start = _start(n_max, x)
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1.0e-30
    norm = 0.0
    for k in range(start, 0, -1):
        if k <= n_max:
            out[k] = j_cur
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = k * two_over_x * j_cur - j_next
        j_next = j_cur
        j_cur = j_prev
        if fabs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            norm /= _BIG
            for q in range(k, n_max + 1):
                out[q] /= _BIG
    out[0] = j_cur
    norm += j_cur
    scale = 1.0 / norm
    for k in range(n_max + 1):
        out[k] *= scale


def jacobi_eigh(double complex[:, ::1] a, double complex[:, ::1] v,
                double tol=1.0e-15, int max_sweeps=60):
    """In-place cyclic Jacobi; see ``_kernels_py.jacobi_eigh``."""
    cdef int sweeps
    with nogil:
        sweeps = _jacobi(a, v, tol, max_sweeps)
    return sweeps


cdef int _jacobi(double complex[:, ::1] a, double complex[:, ::1] v,
                 double tol, int max_sweeps) noexcept nogil:
    cdef int n = a.shape[0]
    cdef int i, j, p, q, k, sweep
    cdef double scale = 0.0, thresh, off, mag, app, aqq, theta, t, c, s
    cdef double complex apq, phase, sp, spc, akp, akq, vkp, vkq, apk, aqk

    for i in range(n):
        for j in range(n):
            v[i, j] = 1.0 if i == j else 0.0
    for i in range(n):
        a[i, i] = creal(a[i, i])
    for i in range(n):
        for j in range(n):
            scale += cabs(a[i, j]) ** 2
    if scale == 0.0:
        return 0
    thresh = (tol * tol) * scale

    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += cabs(a[p, q]) ** 2
        if off <= thresh:
            return sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = cabs(apq)
                if mag == 0.0:
                    continue
                phase = apq * (1.0 / mag)
                app = creal(a[p, p])
                aqq = creal(a[q, q])
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                sp = s * phase
                spc = conj(sp)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - spc * akq
                    a[k, q] = sp * akp + c * akq
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - spc * vkq
                    v[k, q] = sp * vkp + c * vkq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sp * aqk
                    a[q, k] = spc * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
    return max_sweeps


def jacobi_eigh_many(double complex[:, :, ::1] a, double complex[:, :, ::1] v,
                     double tol=1.0e-15, int max_sweeps=60):
    """``jacobi_eigh`` over a stack of matrices, in place."""
    cdef Py_ssize_t k
    with nogil:
        for k in range(a.shape[0]):
            _jacobi(a[k], v[k], tol, max_sweeps)
