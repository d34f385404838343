# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: one-step lattice map, its incoherent counterpart,
and compensated moment sums.

Complex arrays are addressed through their interleaved float64 view, so the
arithmetic below is plain IEEE double math in the same operation order as the
NumPy backend (see _kernels_py.py). Compiled with -ffp-contract=off to keep
the two backends bit-compatible.
"""

import numpy as np

from libc.math cimport sqrt

cdef double INV_SQRT2 = 1.0 / sqrt(2.0)


cdef inline void _kahan(double x, double* s, double* c) noexcept nogil:
    # compensated accumulation: keeps a 2000-step moment series near 1 ulp
    cdef double y = x - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


cdef inline double _site_prob(double[::1] av, double[::1] bv, Py_ssize_t j) noexcept nogil:
    return av[2*j]*av[2*j] + av[2*j+1]*av[2*j+1] + bv[2*j]*bv[2*j] + bv[2*j+1]*bv[2*j+1]


cdef inline double _boundary_prob(double[::1] av, double[::1] bv, Py_ssize_t n) noexcept nogil:
    cdef double total = _site_prob(av, bv, 0)
    total += _site_prob(av, bv, 1)
    total += _site_prob(av, bv, n - 2)
    total += _site_prob(av, bv, n - 1)
    return total


cdef inline double _boundary_prob_field(double[::1] F, Py_ssize_t n) noexcept nogil:
    return ((F[0] + F[1]) + F[n - 2]) + F[n - 1]


cdef void _c_moments(double[::1] F, long k_min, Py_ssize_t n, double* res) noexcept nogil:
    cdef double s_norm = 0, c_norm = 0
    cdef double s_mean = 0, c_mean = 0
    cdef double s_m2 = 0, c_m2 = 0
    cdef double s_p = 0, c_p = 0
    cdef double kf, f
    cdef Py_ssize_t j
    for j in range(n):
        f = F[j]
        kf = <double> (k_min + j)
        _kahan(f, &s_norm, &c_norm)
        _kahan(kf * f, &s_mean, &c_mean)
        _kahan((kf * kf) * f, &s_m2, &c_m2)
        _kahan(f * f, &s_p, &c_p)
    res[0] = s_norm
    res[1] = s_mean
    res[2] = s_m2 - s_mean * s_mean
    res[3] = 1.0 / s_p


def moments(F, k_min):
    """Return (norm, mean, variance, participation) of a probability array."""
    cdef double[::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double res[4]
    _c_moments(Fv, k_min, Fv.shape[0], res)
    return res[0], res[1], res[2], res[3]


def evolve_coherent(a, b, phase, long k_min, long t0, rec_steps,
                    double boundary_tol, double[:, ::1] out):
    """Advance (a, b) by rec_steps[-1] applications of the one-step map.

    Same contract as the NumPy backend: in-place update, observable rows
    (t, variance, mean, participation, boundary_leak, norm) at the listed
    step offsets, and the failing absolute step (or 0) as return value.
    """
    cdef double[::1] av = a.view(np.float64)
    cdef double[::1] bv = b.view(np.float64)
    cdef const double[::1] pv = phase.view(np.float64)
    cdef long[::1] rec = np.ascontiguousarray(rec_steps, dtype=np.int64)
    cdef Py_ssize_t n = av.shape[0] // 2
    cdef long steps = rec[rec.shape[0] - 1]
    cdef Py_ssize_t n_rec = rec.shape[0]

    buf_a = np.empty(2 * n, dtype=np.float64)
    buf_b = np.empty(2 * n, dtype=np.float64)
    Fbuf = np.empty(n, dtype=np.float64)
    cdef double[::1] na = buf_a
    cdef double[::1] nb = buf_b
    cdef double[::1] Fv = Fbuf
    cdef double[::1] tmp

    cdef Py_ssize_t j, ptr = 0
    cdef long i = 0
    cdef int swapped = 0
    cdef double leak = 0.0
    cdef double tr, ti, pr, pi
    cdef double res[4]

    for i in range(1, steps + 1):
        leak = _boundary_prob(av, bv, n)
        if leak > boundary_tol:
            break
        with nogil:
            for j in range(n - 1):
                tr = (av[2*(j+1)] + bv[2*(j+1)]) * INV_SQRT2
                ti = (av[2*(j+1)+1] + bv[2*(j+1)+1]) * INV_SQRT2
                pr = pv[2*j]
                pi = pv[2*j+1]
                na[2*j] = tr * pr - ti * pi
                na[2*j+1] = tr * pi + ti * pr
            na[2*(n-1)] = 0.0
            na[2*(n-1)+1] = 0.0
            for j in range(1, n):
                tr = (av[2*(j-1)] - bv[2*(j-1)]) * INV_SQRT2
                ti = (av[2*(j-1)+1] - bv[2*(j-1)+1]) * INV_SQRT2
                pr = pv[2*j]
                pi = pv[2*j+1]
                nb[2*j] = tr * pr - ti * pi
                nb[2*j+1] = tr * pi + ti * pr
            nb[0] = 0.0
            nb[1] = 0.0
        tmp = av; av = na; na = tmp
        tmp = bv; bv = nb; nb = tmp
        swapped ^= 1
        if ptr < n_rec and i == rec[ptr]:
            with nogil:
                for j in range(n):
                    Fv[j] = _site_prob(av, bv, j)
                _c_moments(Fv, k_min, n, res)
            out[ptr, 0] = <double> (t0 + i)
            out[ptr, 1] = res[2]
            out[ptr, 2] = res[1]
            out[ptr, 3] = res[3]
            out[ptr, 4] = _boundary_prob_field(Fv, n)
            out[ptr, 5] = res[0]
            ptr += 1
    if swapped:
        # results currently live in the scratch buffers; copy back
        a.view(np.float64)[:] = buf_a
        b.view(np.float64)[:] = buf_b
    if i <= steps and leak > boundary_tol:
        return t0 + i
    return 0


def markov_evolve(F, long k_min, long t0, rec_steps,
                  double boundary_tol, double[:, ::1] out):
    """Interference-free counterpart: F_k <- (F_{k+1} + F_{k-1}) / 2."""
    cdef double[::1] Fv = F
    cdef long[::1] rec = np.ascontiguousarray(rec_steps, dtype=np.int64)
    cdef Py_ssize_t n = Fv.shape[0]
    cdef long steps = rec[rec.shape[0] - 1]
    cdef Py_ssize_t n_rec = rec.shape[0]

    buf = np.empty(n, dtype=np.float64)
    cdef double[::1] nf = buf
    cdef double[::1] tmp

    cdef Py_ssize_t j, ptr = 0
    cdef long i = 0
    cdef int swapped = 0
    cdef double leak = 0.0
    cdef double res[4]

    for i in range(1, steps + 1):
        leak = _boundary_prob_field(Fv, n)
        if leak > boundary_tol:
            break
        with nogil:
            for j in range(1, n - 1):
                nf[j] = 0.5 * (Fv[j+1] + Fv[j-1])
            nf[0] = 0.5 * Fv[1]
            nf[n-1] = 0.5 * Fv[n-2]
        tmp = Fv; Fv = nf; nf = tmp
        swapped ^= 1
        if ptr < n_rec and i == rec[ptr]:
            _c_moments(Fv, k_min, n, res)
            out[ptr, 0] = <double> (t0 + i)
            out[ptr, 1] = res[2]
            out[ptr, 2] = res[1]
            out[ptr, 3] = res[3]
            out[ptr, 4] = _boundary_prob_field(Fv, n)
            out[ptr, 5] = res[0]
            ptr += 1
    if swapped:
        np.asarray(F)[:] = buf
    if i <= steps and leak > boundary_tol:
        return t0 + i
    return 0
