# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for small dense symmetric matrices.

Cyclic Jacobi eigenvalues and partial-pivot LU determinants. For the
n <= ~16 matrices in completion objectives these avoid the per-call
overhead of LAPACK dispatch through numpy.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, log, NAN

cnp.import_array()

cdef int MAX_SWEEPS = 100


cdef void _jacobi(double[:, ::1] a, Py_ssize_t n) noexcept nogil:
    # diagonalizes a in place; eigenvalues end up on the diagonal
    cdef Py_ssize_t p, q, k, sweep
    cdef double off, scale, app, aqq, apq, theta, t, c, s, tau, akp, akq
    for sweep in range(MAX_SWEEPS):
        off = 0.0
        scale = 0.0
        for p in range(n):
            scale += a[p, p] * a[p, p]
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if off <= 1e-32 * scale or off == 0.0:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp - s * (akq + tau * akp)
                    a[p, k] = a[k, p]
                    a[k, q] = akq + s * (akp - tau * akq)
                    a[q, k] = a[k, q]


def sym_eigvalsh(a):
    """Ascending eigenvalues of a symmetric matrix (cyclic Jacobi)."""
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    with nogil:
        _jacobi(m, n)
    return np.sort(np.diagonal(np.asarray(m)).copy())


def det(a):
    """Determinant by LU with partial pivoting."""
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j, k, piv
    cdef double d = 1.0, best, f, tmp
    with nogil:
        for k in range(n):
            piv = k
            best = fabs(m[k, k])
            for i in range(k + 1, n):
                if fabs(m[i, k]) > best:
                    best = fabs(m[i, k])
                    piv = i
            if best == 0.0:
                d = 0.0
                break
            if piv != k:
                for j in range(n):
                    tmp = m[k, j]
                    m[k, j] = m[piv, j]
                    m[piv, j] = tmp
                d = -d
            d *= m[k, k]
            for i in range(k + 1, n):
                f = m[i, k] / m[k, k]
                for j in range(k + 1, n):
                    m[i, j] -= f * m[k, j]
    return d


def whitened_log_sq(w, c):
    """Return ``(sum(log(eig)**2), min(eig))`` for ``eig = eig(w @ c @ w)``.

    The log sum is NaN when the smallest eigenvalue is not positive.
    """
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:, ::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0]
    cdef double[:, ::1] tmp = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] m = np.empty((n, n), dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double acc, mn, total, ev
    with nogil:
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for k in range(n):
                    acc += wv[i, k] * cv[k, j]
                tmp[i, j] = acc
        for i in range(n):
            for j in range(i, n):
                acc = 0.0
                for k in range(n):
                    acc += tmp[i, k] * wv[k, j]
                m[i, j] = acc
        # only the upper triangle was formed; mirror it
        for i in range(n):
            for j in range(i + 1, n):
                m[j, i] = m[i, j]
        _jacobi(m, n)
        mn = m[0, 0]
        for i in range(1, n):
            if m[i, i] < mn:
                mn = m[i, i]
        total = NAN
        if mn > 0.0:
            total = 0.0
            for i in range(n):
                ev = log(m[i, i])
                total += ev * ev
    return total, mn
