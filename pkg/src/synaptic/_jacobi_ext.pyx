# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi sweep kernel."""
from libc.math cimport sqrt, fabs

import numpy as np


def jacobi_sweeps(double[:, ::1] a, double off_tol, int max_sweeps):
    """Diagonalize the symmetric matrix ``a`` in place.

    Returns ``(eigenvectors, sweeps, off)`` where ``off`` is the final
    off-diagonal Frobenius norm. Eigenvalues are left on the diagonal of ``a``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, p, q, k
    cdef double apq, theta, t, c, s, tau, akp, akq, vkp, vkq, off
    cdef int sweep = 0
    v_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] v = v_arr

    off = _offdiag(a, n)
    while off > off_tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = a[p, p] - t * apq
                a[q, q] = a[q, q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp - s * (akq + tau * akp)
                        a[k, q] = akq + s * (akp - tau * akq)
                        a[p, k] = a[k, p]
                        a[q, k] = a[k, q]
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp - s * (vkq + tau * vkp)
                    v[k, q] = vkq + s * (vkp - tau * vkq)
        sweep += 1
        off = _offdiag(a, n)
    return v_arr, sweep, off


cdef double _offdiag(double[:, ::1] a, Py_ssize_t n):
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return sqrt(acc)
