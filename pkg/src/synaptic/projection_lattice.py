"""The orthomodular lattice of projections.

Meets are computed in general (not only for commuting pairs) as the
projection onto the intersection of ranges, read off as the eigenvalue-2
eigenspace of ``p + q``; joins follow by De Morgan duality.
"""
from itertools import combinations

import numpy as np

from .errors import DiagnosticError, InputError
from .matrix_model import Projection, SymMatrix, commutes, leq, maxabs

__all__ = [
    "Projection",
    "complement",
    "meet",
    "join",
    "orthogonal",
    "mackey_compatible",
    "is_boolean_family",
    "proj_leq",
    "span_projection",
]

# disagreement between two equivalent criteria is only a fault outside this band
_BAND = 100.0


def _check(p, q):
    if p.dim != q.dim:
        raise InputError(f"dimension mismatch: {p.dim} vs {q.dim}")


def span_projection(vectors, tol=1e-10) -> Projection:
    """Projection onto the span of the given column vectors."""
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v[:, None]
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    cutoff = max(v.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    return Projection.from_basis(u[:, s > cutoff], tol)


def complement(p: Projection) -> Projection:
    """Orthocomplement ``1 - p``."""
    return Projection._trusted(np.eye(p.dim) - p.entries, p.dim - p.rank, p.tol)


def meet(p: Projection, q: Projection) -> Projection:
    """Greatest projection below both ``p`` and ``q``."""
    _check(p, q)
    tol = max(p.tol, q.tol)
    if p.rank == 0 or q.rank == 0:
        return Projection.zero(p.dim, tol)
    s = SymMatrix._wrap(p.entries + q.entries, tol)
    es = s.eigensystem()
    top = np.abs(es.eigenvalues - 2.0) <= es.cluster_tol
    result = Projection.from_basis(es.eigenvectors[:, top], tol)
    if result.rank > min(p.rank, q.rank):
        raise DiagnosticError(f"meet rank {result.rank} exceeds min rank {min(p.rank, q.rank)}")
    return result


def join(p: Projection, q: Projection) -> Projection:
    """Least projection above both ``p`` and ``q``; exactly ``p + q`` when p is orthogonal to q."""
    _check(p, q)
    if orthogonal(p, q):
        return Projection._trusted(p.entries + q.entries, p.rank + q.rank, max(p.tol, q.tol))
    return complement(meet(complement(p), complement(q)))


def proj_leq(p: Projection, q: Projection, tol=None) -> bool:
    return leq(p.matrix, q.matrix, tol)


def orthogonal(p: Projection, q: Projection, tol=None) -> bool:
    """``pq = 0``, cross-checked against ``p + q <= 1``."""
    _check(p, q)
    tol = max(p.tol, q.tol) if tol is None else tol
    prod = maxabs(p.entries @ q.entries)
    by_product = prod <= tol
    excess = float(SymMatrix._wrap(p.entries + q.entries).eigensystem().eigenvalues[-1]) - 1.0
    by_order = excess <= tol
    if by_product != by_order and max(prod, excess) > _BAND * p.dim * tol:
        raise DiagnosticError(
            "orthogonality criteria disagree",
            {"max|pq|": prod, "lambda_max(p+q)-1": excess, "tol": tol},
        )
    return by_product


def mackey_compatible(p: Projection, q: Projection, tol=None) -> bool:
    """Lattice compatibility ``p = (p meet q) join (p meet q')``.

    The lattice criterion is returned; the commutation criterion is evaluated
    alongside and a :class:`DiagnosticError` is raised if they disagree.
    """
    _check(p, q)
    tol = 10.0 * max(p.tol, q.tol) if tol is None else tol
    rebuilt = join(meet(p, q), meet(p, complement(q)))
    defect = maxabs(rebuilt.entries - p.entries)
    lattice = defect <= tol
    comm = maxabs(p.entries @ q.entries - q.entries @ p.entries)
    algebraic = comm <= tol
    if lattice != algebraic and max(defect, comm) > _BAND * tol:
        raise DiagnosticError(
            "Mackey compatibility disagrees with commutation",
            {"lattice_defect": defect, "commutator": comm, "tol": tol},
        )
    return lattice


def is_boolean_family(ps) -> bool:
    ps = list(ps)
    if not ps:
        raise InputError("is_boolean_family needs a nonempty list")
    for p in ps[1:]:
        _check(ps[0], p)
    return all(mackey_compatible(p, q) for p, q in combinations(ps, 2))


def commuting(p: Projection, q: Projection, tol=None) -> bool:
    return commutes(p.matrix, q.matrix, tol)
