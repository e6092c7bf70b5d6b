"""Pure-Python/numpy fallback for the cyclic Jacobi sweep kernel.

Performs the same rotation sequence as the compiled kernel, with the row and
column updates vectorized through numpy.
"""
import math

import numpy as np


def _offdiag(a):
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def jacobi_sweeps(a, off_tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    sweep = 0
    off = _offdiag(a)
    while off > off_tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = a[q, p] = 0.0
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                newp = colp - s * (colq + tau * colp)
                newq = colq + s * (colp - tau * colq)
                newp[p] = a[p, p]
                newp[q] = 0.0
                newq[q] = a[q, q]
                newq[p] = 0.0
                a[:, p] = newp
                a[:, q] = newq
                a[p, :] = newp
                a[q, :] = newq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp - s * (vq + tau * vp)
                v[:, q] = vq + s * (vp - tau * vq)
        sweep += 1
        off = _offdiag(a)
    return v, sweep, off
