"""Seeded random instances for audits and property tests.

Every generator takes a ``numpy.random.Generator`` so that a case is a pure
function of its seed.
"""
import zlib
from fractions import Fraction

import numpy as np

from .commutative_model import DiscreteSpace, FnElement
from .loomis_sikorski import GroundSet
from .matrix_model import Projection, SymMatrix


def case_rng(seed, name, case):
    """Independent stream for case ``case`` of law ``name``."""
    return np.random.default_rng([int(seed), zlib.crc32(name.encode()), int(case)])


def random_orthogonal(rng, dim):
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def random_symmetric(rng, dim, kind=None, tol=1e-10) -> SymMatrix:
    """Random symmetric matrix of one of three kinds.

    ``normal``: symmetrized Gaussian entries. ``integer``: small integer
    entries. ``clustered``: eigenvalues drawn with repeats from a few small
    integers, rotated by a random orthogonal matrix.
    """
    kind = kind or rng.choice(["normal", "integer", "clustered"])
    if kind == "normal":
        x = rng.standard_normal((dim, dim)) * rng.choice([0.5, 1.0, 3.0])
        m = (x + x.T) / 2
    elif kind == "integer":
        x = rng.integers(-4, 5, size=(dim, dim)).astype(float)
        m = np.triu(x) + np.triu(x, 1).T
    elif kind == "clustered":
        vals = rng.choice(np.arange(-3, 4), size=dim).astype(float)
        q = random_orthogonal(rng, dim)
        m = (q * vals) @ q.T
        m = (m + m.T) / 2
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return SymMatrix(m, tol)


def random_psd(rng, dim, tol=1e-10) -> SymMatrix:
    x = rng.standard_normal((dim, max(1, int(rng.integers(1, dim + 1)))))
    return SymMatrix._wrap(x @ x.T, tol)


def projection_from_columns(q, cols, tol=1e-10) -> Projection:
    return Projection.from_basis(q[:, sorted(cols)], tol)


def random_subset(rng, n):
    return [i for i in range(n) if rng.random() < 0.5]


def commuting_projections(rng, dim, tol=1e-10):
    """Two projections diagonal in one random orthonormal basis."""
    q = random_orthogonal(rng, dim)
    s, t = random_subset(rng, dim), random_subset(rng, dim)
    if rng.random() < 0.25:
        t = sorted(set(t) | set(s))  # force a comparable pair now and then
    return projection_from_columns(q, s, tol), projection_from_columns(q, t, tol)


def comparable_projections(rng, dim, tol=1e-10):
    """``p <= q`` in a random basis."""
    q = random_orthogonal(rng, dim)
    t = random_subset(rng, dim)
    s = [i for i in t if rng.random() < 0.5]
    return projection_from_columns(q, s, tol), projection_from_columns(q, t, tol)


def generic_projection(rng, dim, tol=1e-10):
    q = random_orthogonal(rng, dim)
    k = int(rng.integers(0, dim + 1))
    return projection_from_columns(q, range(k), tol)


def random_rational(rng, bound=5, max_den=8):
    return Fraction(int(rng.integers(-bound * max_den, bound * max_den + 1)), int(rng.integers(1, max_den + 1)))


def random_fn(rng, space: DiscreteSpace, bound=5, max_den=8) -> FnElement:
    vals = []
    for _ in range(len(space)):
        vals.append(0 if rng.random() < 0.2 else random_rational(rng, bound, max_den))
    return FnElement(space, tuple(vals))


def random_effect(rng, space: DiscreteSpace, max_den=8) -> FnElement:
    vals = []
    for _ in range(len(space)):
        d = int(rng.integers(1, max_den + 1))
        vals.append(Fraction(int(rng.integers(0, d + 1)), d))
    return FnElement(space, tuple(vals))


def random_space(rng, max_size=8) -> DiscreteSpace:
    return DiscreteSpace.of_size(int(rng.integers(1, max_size + 1)))


def random_ground(rng, max_atoms=8, max_null=4) -> GroundSet:
    n_atoms = int(rng.integers(1, max_atoms + 1))
    n_null = int(rng.integers(0, max_null + 1))
    return GroundSet(tuple(f"x{i + 1}" for i in range(n_atoms)), tuple(f"z{i + 1}" for i in range(n_null)))


def random_density(rng, dim, tol=1e-10) -> SymMatrix:
    """Random PSD matrix of trace one, of random rank."""
    x = rng.standard_normal((dim, int(rng.integers(1, dim + 1))))
    w = x @ x.T
    return SymMatrix._wrap(w / np.trace(w), tol)


def grid_states(n, max_den=8):
    """All probability vectors on ``n`` points with entries ``k/d``, ``d <= max_den``.

    Returned without repeats, in lexicographic order.
    """
    seen = set()

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for k in range(total + 1):
            for rest in compositions(total - k, parts - 1):
                yield (k,) + rest

    for d in range(1, max_den + 1):
        for comp in compositions(d, n):
            seen.add(tuple(Fraction(k, d) for k in comp))
    return sorted(seen)
