"""Real symmetric matrices as the prototype synaptic algebra.

Elements are :class:`SymMatrix` values; products ``a @ b`` are taken in the
enveloping algebra of all square matrices and return plain arrays, while every
operation in this module returns another :class:`SymMatrix` (or a
:class:`Projection`).
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .eigen import EigenSystem, cluster_tolerance, eigensystem
from .errors import DiagnosticError, DomainError, InputError, NotInvertibleError

DEFAULT_TOL = 1e-10
INVERT_REL = 1e-10


def maxabs(x) -> float:
    """Entrywise max norm of an array (0 for empty)."""
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


class SymMatrix:
    """Immutable real symmetric matrix with an attached tolerance.

    Parameters
    ----------
    entries : array_like
        Square ``dim x dim`` array, or a scalar for ``dim == 1``.
    tol : float
        Symmetry tolerance; ``|a_ij - a_ji| <= tol`` is required. The tolerance
        is carried through every derived element and never rescaled.
    """

    def __init__(self, entries, tol=DEFAULT_TOL):
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InputError(f"expected a nonempty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("matrix entries must be finite")
        if tol < 0:
            raise InputError("tol must be nonnegative")
        defect = maxabs(arr - arr.T)
        if defect > tol:
            raise InputError(f"symmetry defect {defect:.3e} exceeds tol {tol:.3e}")
        self._init((arr + arr.T) / 2.0, tol)

    def _init(self, arr, tol):
        arr.setflags(write=False)
        self._a = arr
        self.tol = float(tol)
        self._eig = None

    @classmethod
    def _wrap(cls, arr, tol=DEFAULT_TOL):
        # internal results: symmetrize, skip validation
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.float64)
        obj._init((arr + arr.T) / 2.0, tol)
        return obj

    @classmethod
    def identity(cls, dim, tol=DEFAULT_TOL):
        return cls._wrap(np.eye(dim), tol)

    @classmethod
    def zeros(cls, dim, tol=DEFAULT_TOL):
        return cls._wrap(np.zeros((dim, dim)), tol)

    @classmethod
    def diag(cls, values, tol=DEFAULT_TOL):
        return cls._wrap(np.diag(np.asarray(values, dtype=np.float64)), tol)

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._a

    def __array__(self, dtype=None, copy=None):
        return np.array(self._a, dtype=dtype)

    def eigensystem(self) -> EigenSystem:
        if self._eig is None:
            self._eig = eigensystem(self._a)
        return self._eig

    def _other(self, other):
        if isinstance(other, SymMatrix):
            if other.dim != self.dim:
                raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other._a, max(self.tol, other.tol)
        if np.isscalar(other):
            return float(other) * np.eye(self.dim), self.tol
        return NotImplemented, None

    def __add__(self, other):
        b, tol = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return SymMatrix._wrap(self._a + b, tol)

    __radd__ = __add__

    def __sub__(self, other):
        b, tol = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return SymMatrix._wrap(self._a - b, tol)

    def __rsub__(self, other):
        b, tol = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return SymMatrix._wrap(b - self._a, tol)

    def __neg__(self):
        return SymMatrix._wrap(-self._a, self.tol)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SymMatrix._wrap(float(scalar) * self._a, self.tol)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        # enveloping-algebra product; generally not symmetric
        b = other._a if isinstance(other, SymMatrix) else np.asarray(other)
        return self._a @ b

    def __rmatmul__(self, other):
        return np.asarray(other) @ self._a

    def allclose(self, other, atol=None) -> bool:
        b = other._a if isinstance(other, SymMatrix) else np.asarray(other, dtype=float)
        if b.shape != self._a.shape:
            return False
        return maxabs(self._a - b) <= (self.tol if atol is None else atol)

    def __repr__(self):
        return f"SymMatrix(dim={self.dim}, tol={self.tol:g}, entries={self._a.tolist()!r})"


class Projection:
    """Idempotent symmetric matrix ``p = p**2``.

    Construction checks the idempotence defect against ``tol`` and then
    repairs the matrix by rounding its spectrum to {0, 1}, so lattice
    identities downstream hold to rounding error.
    """

    def __init__(self, matrix, rank=None, tol=None):
        m = matrix if isinstance(matrix, SymMatrix) else SymMatrix(matrix, DEFAULT_TOL if tol is None else tol)
        tol = m.tol if tol is None else float(tol)
        a = m.entries
        defect = maxabs(a @ a - a)
        if defect > tol:
            raise InputError(f"idempotence defect {defect:.3e} exceeds tol {tol:.3e}")
        es = m.eigensystem()
        basis = es.eigenvectors[:, es.eigenvalues > 0.5]
        if rank is not None and int(rank) != basis.shape[1]:
            raise InputError(f"declared rank {rank} but spectral rank is {basis.shape[1]}")
        self._set(basis, m.dim, tol)

    def _set(self, basis, dim, tol):
        self._basis = np.ascontiguousarray(basis).reshape(dim, -1)
        self.rank = self._basis.shape[1]
        self.matrix = SymMatrix._wrap(self._basis @ self._basis.T, tol)

    @classmethod
    def from_basis(cls, basis, tol=DEFAULT_TOL):
        """Projection onto the span of orthonormal columns ``basis``."""
        basis = np.asarray(basis, dtype=np.float64)
        obj = cls.__new__(cls)
        obj._set(basis, basis.shape[0], tol)
        return obj

    @classmethod
    def _trusted(cls, arr, rank, tol=DEFAULT_TOL):
        # arr is known to be an exact-up-to-rounding projection of this rank
        obj = cls.__new__(cls)
        obj._basis = None
        obj.rank = int(rank)
        obj.matrix = SymMatrix._wrap(arr, tol)
        return obj

    @classmethod
    def zero(cls, dim, tol=DEFAULT_TOL):
        return cls.from_basis(np.zeros((dim, 0)), tol)

    @classmethod
    def identity(cls, dim, tol=DEFAULT_TOL):
        return cls.from_basis(np.eye(dim), tol)

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def tol(self) -> float:
        return self.matrix.tol

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    @property
    def basis(self) -> np.ndarray:
        """Orthonormal basis of the range (``dim x rank``)."""
        if self._basis is None:
            es = self.matrix.eigensystem()
            self._basis = es.eigenvectors[:, es.eigenvalues > 0.5]
        return self._basis

    def idempotence_defect(self) -> float:
        a = self.entries
        return maxabs(a @ a - a)

    def allclose(self, other, atol=None) -> bool:
        other = other.matrix if isinstance(other, Projection) else other
        return self.matrix.allclose(other, atol)

    def __repr__(self):
        return f"Projection(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True)
class SpectrumSet:
    points: Tuple[float, ...]
    multiplicities: Tuple[int, ...]

    def __contains__(self, value):
        return any(abs(value - p) <= cluster_tolerance(self.norm) for p in self.points)

    @property
    def norm(self) -> float:
        return max(abs(p) for p in self.points)


@dataclass(frozen=True)
class SpectralResolution:
    """Ascending right-continuous step family ``lambda -> p_{a,lambda}``.

    ``projections[i]`` is the value on ``[breakpoints[i], breakpoints[i+1])``;
    below the first breakpoint the family is zero.
    """

    breakpoints: Tuple[float, ...]
    projections: Tuple[Projection, ...]
    lower_bound: float
    upper_bound: float

    @property
    def dim(self) -> int:
        return self.projections[0].dim

    def at(self, lam) -> Projection:
        k = int(np.searchsorted(self.breakpoints, lam, side="right"))
        if k == 0:
            return Projection.zero(self.dim, self.projections[0].tol)
        return self.projections[k - 1]

    def increments(self):
        """``(lambda_i, p_i - p_{i-1})`` pairs as arrays."""
        prev = np.zeros((self.dim, self.dim))
        out = []
        for lam, p in zip(self.breakpoints, self.projections):
            out.append((lam, p.entries - prev))
            prev = p.entries
        return out

    def reconstruct(self) -> SymMatrix:
        acc = np.zeros((self.dim, self.dim))
        for lam, dp in self.increments():
            acc += lam * dp
        return SymMatrix._wrap(acc, self.projections[0].tol)


def _check_dims(a, b):
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _from_eigen(a, values, vectors=None):
    v = a.eigensystem().eigenvectors if vectors is None else vectors
    return SymMatrix._wrap((v * values) @ v.T, a.tol)


def jordan_product(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    _check_dims(a, b)
    return SymMatrix._wrap(0.5 * (a.entries @ b.entries + b.entries @ a.entries), max(a.tol, b.tol))


def square(a: SymMatrix) -> SymMatrix:
    return SymMatrix._wrap(a.entries @ a.entries, a.tol)


def power(a: SymMatrix, n: int) -> SymMatrix:
    if n < 0:
        raise DomainError("negative powers need invert()")
    acc = SymMatrix.identity(a.dim, a.tol)
    for _ in range(n):
        acc = jordan_product(acc, a)  # acc commutes with a, so this is acc*a
    return acc


def quadratic_map(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    """``aba``, computed inside the Jordan algebra as 2a.(a.b) - a^2.b."""
    _check_dims(a, b)
    return 2.0 * jordan_product(a, jordan_product(a, b)) - jordan_product(square(a), b)


def sqrt_psd(a: SymMatrix) -> SymMatrix:
    es = a.eigensystem()
    lo = float(es.eigenvalues[0])
    if lo < -a.tol:
        raise DomainError(f"sqrt_psd: negative eigenvalue {lo:.3e} below -tol")
    return _from_eigen(a, np.sqrt(np.clip(es.eigenvalues, 0.0, None)))


def abs_pos_neg(a: SymMatrix):
    """``(|a|, a+, a-)`` with ``|a|`` the positive square root of ``a^2``.

    The root is unique, so it is taken as ``|lambda|`` on each eigenvector of
    ``a``; forming ``a^2`` first would turn zero eigenvalues into noise of
    size ``sqrt(eps) * ||a||``. The parts ``(|a| +/- a) / 2`` are likewise
    taken per eigenvalue, so clipped eigenvalues are exact zeros instead of
    the cancellation error of a large ``|a| + a``.
    """
    lam = a.eigensystem().eigenvalues
    absval = _from_eigen(a, np.abs(lam))
    pos = _from_eigen(a, np.maximum(lam, 0.0))
    neg = _from_eigen(a, np.maximum(-lam, 0.0))
    return absval, pos, neg


def pos_part(a: SymMatrix) -> SymMatrix:
    return abs_pos_neg(a)[1]


def _range_split(a: SymMatrix, zero_tol=None):
    es = a.eigensystem()
    if zero_tol is None:
        zero_tol = es.cluster_tol
    nonzero = np.abs(es.eigenvalues) > zero_tol
    return es.eigenvectors[:, nonzero], es.eigenvectors[:, ~nonzero]


def carrier(a: SymMatrix, zero_tol=None) -> Projection:
    """Projection onto the range of ``a``.

    Eigenvalues with ``|lambda| <= zero_tol`` (default: the cluster tolerance
    of ``a``) are treated as zero.
    """
    rng, _ = _range_split(a, zero_tol)
    return Projection.from_basis(rng, a.tol)


def resolution_projection(a: SymMatrix, lam: float, zero_tol=None) -> Projection:
    """``p_{a,lambda} = 1 - ((a - lambda)^+)^dagger`` evaluated literally."""
    if zero_tol is None:
        zero_tol = a.eigensystem().cluster_tol
    shifted = a - float(lam)
    _, kernel = _range_split(pos_part(shifted), zero_tol)
    return Projection.from_basis(kernel, a.tol)


def spectral_resolution(a: SymMatrix) -> SpectralResolution:
    es = a.eigensystem()
    lams = tuple(v for v, _ in es.clusters())
    projs = tuple(resolution_projection(a, lam, es.cluster_tol) for lam in lams)
    ranks = [p.rank for p in projs]
    if any(r1 >= r2 for r1, r2 in zip(ranks, ranks[1:])) or ranks[-1] != a.dim:
        raise DiagnosticError(f"resolution ranks not strictly ascending to {a.dim}: {ranks}")
    return SpectralResolution(lams, projs, lams[0], lams[-1])


def spectrum(a: SymMatrix) -> SpectrumSet:
    groups = a.eigensystem().clusters()
    return SpectrumSet(tuple(v for v, _ in groups), tuple(c.shape[1] for _, c in groups))


def order_unit_norm(a: SymMatrix) -> float:
    return a.eigensystem().norm


def invert_threshold(a: SymMatrix) -> float:
    return INVERT_REL * max(1.0, order_unit_norm(a))


def invert(a: SymMatrix, eps=None) -> SymMatrix:
    es = a.eigensystem()
    eps = invert_threshold(a) if eps is None else float(eps)
    smallest = float(np.min(np.abs(es.eigenvalues)))
    if smallest < eps:
        raise NotInvertibleError(smallest, eps)
    return _from_eigen(a, 1.0 / es.eigenvalues)


def is_invertible(a: SymMatrix, eps=None) -> bool:
    try:
        invert(a, eps)
    except NotInvertibleError:
        return False
    return True


def commutes(a: SymMatrix, b: SymMatrix, tol=None) -> bool:
    _check_dims(a, b)
    tol = max(a.tol, b.tol) if tol is None else tol
    ab = a.entries @ b.entries
    return maxabs(ab - ab.T) <= tol  # (ab)^T = ba


def leq(a: SymMatrix, b: SymMatrix, tol=None) -> bool:
    """``a <= b`` in the positive-semidefinite order."""
    _check_dims(a, b)
    tol = max(a.tol, b.tol) if tol is None else tol
    return float((b - a).eigensystem().eigenvalues[0]) >= -tol
