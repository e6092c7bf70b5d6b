"""Symmetric eigensolver with spectral clustering.

The sweep kernel is compiled with Cython when available
(``synaptic._jacobi_ext``); otherwise the numpy implementation in
``synaptic._jacobi_py`` is used. Setting ``SYNAPTIC_PURE_PYTHON=1`` forces the
fallback. The chosen backend is recorded in :data:`BACKEND`.
"""
import os
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _jacobi_py

if os.environ.get("SYNAPTIC_PURE_PYTHON", "") not in ("", "0"):
    _kernel = _jacobi_py
    BACKEND = "python"
else:
    try:
        from . import _jacobi_ext as _kernel

        BACKEND = "cython"
    except ImportError:  # extension not built
        _kernel = _jacobi_py
        BACKEND = "python"

OFF_TOL = 1e-12
MAX_SWEEPS = 64
CLUSTER_REL = 1e-8


def cluster_tolerance(norm):
    """Eigenvalues closer than this merge into one spectral point."""
    return CLUSTER_REL * max(1.0, norm)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues, orthonormal eigenvectors (columns), cluster rule."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cluster_tol: float
    sweeps: int = 0

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def clusters(self) -> List[Tuple[float, np.ndarray]]:
        """Group near-equal eigenvalues.

        Returns ``(value, columns)`` pairs in ascending order of value, where
        ``value`` is the mean of the merged eigenvalues and ``columns`` is an
        orthonormal basis of the corresponding eigenspace.
        """
        w = self.eigenvalues
        groups = []
        start = 0
        for i in range(1, len(w) + 1):
            if i == len(w) or w[i] - w[i - 1] > self.cluster_tol:
                groups.append((float(np.mean(w[start:i])), self.eigenvectors[:, start:i]))
                start = i
        return groups

    def orthogonality_defect(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.T @ v - np.eye(v.shape[1]))))

    def reconstruction_defect(self, a) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v @ np.diag(self.eigenvalues) @ v.T - a)))


def jacobi_eigh(a, off_tol=OFF_TOL, max_sweeps=MAX_SWEEPS, backend=None):
    """Cyclic Jacobi diagonalization of a real symmetric array.

    The stopping rule is an off-diagonal Frobenius norm of at most
    ``off_tol * max(1, ||a||_F)``, capped at ``max_sweeps`` sweeps; one
    polishing sweep follows so eigenvectors are accurate to rounding.
    Returns ``(eigenvalues, eigenvectors, sweeps)`` sorted ascending.
    """
    kernel = _select(backend)
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ValueError("jacobi_eigh expects a square array")
    scale = max(1.0, _frobenius(work))
    v, sweeps, _ = kernel.jacobi_sweeps(work, float(off_tol * scale), int(max_sweeps))
    v2, extra, _ = kernel.jacobi_sweeps(work, 0.0, 1)
    if extra:
        v = v @ v2
        sweeps += extra
    w = np.diag(work).copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order]), sweeps


def _frobenius(x):
    # rescaled so entries near the float limit do not overflow when squared
    m = float(np.max(np.abs(x))) if x.size else 0.0
    if m == 0.0 or not np.isfinite(m):
        return m
    return m * float(np.sqrt(np.sum((x / m) ** 2)))


def _select(backend):
    if backend is None:
        return _kernel
    if backend == "python":
        return _jacobi_py
    if backend == "cython":
        from . import _jacobi_ext

        return _jacobi_ext
    raise ValueError(f"unknown backend {backend!r}")


def eigensystem(a, backend=None) -> EigenSystem:
    w, v, sweeps = jacobi_eigh(a, backend=backend)
    norm = float(np.max(np.abs(w))) if len(w) else 0.0
    return EigenSystem(w, v, cluster_tolerance(norm), sweeps)
