# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``_fallback`` one-for-one."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()

NAME = "cython"


cdef inline double _sqdist(const double[:, ::1] A, Py_ssize_t i,
                           const double[:, ::1] B, Py_ssize_t j,
                           Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0, t
    cdef Py_ssize_t k
    for k in range(d):
        t = A[i, k] - B[j, k]
        s += t * t
    return s


def gaussian_gram(A, B, double sigma):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], d = a.shape[1]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double g = -0.5 / (sigma * sigma)
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            for j in range(m):
                o[i, j] = exp(_sqdist(a, i, b, j, d) * g)
    return out


def gram_mean(A, B, double sigma):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], d = a.shape[1]
    cdef double g = -0.5 / (sigma * sigma)
    cdef double total = 0.0, row
    cdef Py_ssize_t i, j
    cdef bint same = A is B
    with nogil:
        if same:
            # symmetric: strict upper triangle twice plus the unit diagonal
            for i in range(n):
                row = 0.0
                for j in range(i + 1, n):
                    row += exp(_sqdist(a, i, a, j, d) * g)
                total += row
            total = 2.0 * total + n
        else:
            for i in range(n):
                row = 0.0
                for j in range(m):
                    row += exp(_sqdist(a, i, b, j, d) * g)
                total += row
    return total / (<double>n * <double>m)


def h_matrix(X, Y, double sigma):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] y = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double g = -0.5 / (sigma * sigma)
    cdef double v
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            o[i, i] = 0.0
            for j in range(i + 1, n):
                v = exp(_sqdist(x, i, x, j, d) * g) + exp(_sqdist(y, i, y, j, d) * g)
                v = v - exp(_sqdist(x, i, y, j, d) * g)
                v = v - exp(_sqdist(x, j, y, i, d) * g)
                o[i, j] = v
                o[j, i] = v
    return out


cdef Py_ssize_t _first_above(const double* cum, Py_ssize_t k, double u) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(k):
        if cum[j] > u:
            return j
    return k - 1


def draw_components(u, weights, capacity):
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const cnp.int64_t[::1] cap = np.ascontiguousarray(capacity, dtype=np.int64)
    cdef Py_ssize_t k = w.shape[0], T = uu.shape[0], t, j
    out = np.empty(T, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    used_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.int64_t[::1] used = used_arr
    cum_arr = np.empty(k, dtype=np.float64)
    alt_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] cum = cum_arr
    cdef double[::1] alt = alt_arr
    cdef double s = 0.0, total
    cdef Py_ssize_t events = 0
    cdef bint failed = False
    for j in range(k):
        s += w[j]
        cum[j] = s
    for j in range(k):
        cum[j] = cum[j] / s
    with nogil:
        for t in range(T):
            j = _first_above(&cum[0], k, uu[t])
            if used[j] >= cap[j]:
                events += 1
                total = 0.0
                for j in range(k):
                    if used[j] < cap[j]:
                        total += w[j]
                    alt[j] = total
                if total <= 0.0:
                    failed = True
                    break
                for j in range(k):
                    alt[j] = alt[j] / total
                j = _first_above(&alt[0], k, uu[t])
                while j > 0 and (used[j] >= cap[j] or w[j] <= 0.0):
                    j -= 1
            o[t] = j
            used[j] += 1
    if failed:
        raise RuntimeError("all weighted components exhausted")
    return out, events
