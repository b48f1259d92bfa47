# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-path numerics for the per-TTI simulation loop.

Function-for-function mirror of ``volteq.kernels.pure``; the package picks
whichever backend imports successfully (see ``volteq.kernels``). Everything
here is RNG-free and operates on plain C doubles so both backends agree to
float rounding.
"""

from libc.math cimport INFINITY, log10, pow

import numpy as np


cpdef double dbm_to_mw(double x_dbm):
    return pow(10.0, x_dbm / 10.0)


cpdef double mw_to_dbm(double x_mw):
    return 10.0 * log10(x_mw)


def sinr_per_ue(double[::1] p_serving_mw, double[:, ::1] p_interf_mw,
                double[::1] k, double noise_mw):
    """Linear per-UE SINR: serving power over noise plus k-weighted neighbor powers."""
    cdef Py_ssize_t n = p_serving_mw.shape[0]
    cdef Py_ssize_t m = k.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double den
    for i in range(n):
        den = noise_mw
        for j in range(m):
            den += k[j] * p_interf_mw[i, j]
        ov[i] = p_serving_mw[i] / den
    return out


cpdef double effective_sinr_db(double[::1] gamma_lin):
    """10*log10 of the arithmetic mean of linear per-UE SINRs."""
    cdef Py_ssize_t n = gamma_lin.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        acc += gamma_lin[i]
    return 10.0 * log10(acc / n)


cpdef double shifted_effective_sinr_db(double[::1] serving_dbm,
                                       double[::1] denom_mw,
                                       double delta_db):
    """Effective SINR with every serving-link power shifted by delta_db (dB)
    against fixed per-UE interference-plus-noise denominators (mW)."""
    cdef Py_ssize_t n = serving_dbm.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        acc += pow(10.0, (serving_dbm[i] + delta_db) / 10.0) / denom_mw[i]
    return 10.0 * log10(acc / n)


cpdef double bound_effective_sinr_db(double[::1] serving_dbm,
                                     double delta_db,
                                     double denom_mw):
    """Effective SINR when all UEs share one pessimistic denominator (mW)."""
    cdef Py_ssize_t n = serving_dbm.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        acc += pow(10.0, (serving_dbm[i] + delta_db) / 10.0)
    return 10.0 * log10(acc / n) - 10.0 * log10(denom_mw)


cpdef double q_update(double[:, ::1] q, Py_ssize_t s, Py_ssize_t a, double r,
                      Py_ssize_t s_next, double alpha, double gamma):
    """In-place value update Q(s,a) <- (1-a)Q(s,a) + a(r + g*max_a' Q(s',a'))."""
    cdef Py_ssize_t n = q.shape[1]
    cdef double best = q[s_next, 0]
    cdef Py_ssize_t j
    for j in range(1, n):
        if q[s_next, j] > best:
            best = q[s_next, j]
    q[s, a] = (1.0 - alpha) * q[s, a] + alpha * (r + gamma * best)
    return q[s, a]


cpdef Py_ssize_t row_argmax(double[:, ::1] q, Py_ssize_t s):
    """Greedy action for state s; ties resolve to the lowest action id."""
    cdef Py_ssize_t n = q.shape[1]
    cdef Py_ssize_t best_j = 0
    cdef double best = q[s, 0]
    cdef Py_ssize_t j
    for j in range(1, n):
        if q[s, j] > best:
            best = q[s, j]
            best_j = j
    return best_j


def clamped_power_walk_max(double p0, double pmax, signed char[:, ::1] deltas):
    """Per row: run p <- min(pmax, p + delta) over the row and return the
    largest power reached anywhere along the walk."""
    cdef Py_ssize_t rows = deltas.shape[0]
    cdef Py_ssize_t cols = deltas.shape[1]
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, t
    cdef double p, peak
    for i in range(rows):
        p = p0
        peak = -INFINITY
        for t in range(cols):
            p = p + deltas[i, t]
            if p > pmax:
                p = pmax
            if p > peak:
                peak = p
        ov[i] = peak
    return out
