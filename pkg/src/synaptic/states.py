"""States, observables, distributions and expectations.

A :class:`State` is either trace-form (a density matrix acting on symmetric
matrices) or weight-form (a probability vector acting on functions over a
:class:`~synaptic.commutative_model.DiscreteSpace`). The observable of a
symmetric matrix is its projection-valued spectral measure, evaluated on
finite unions of half-open intervals and points.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational, Real
from typing import Dict, List, Tuple

import numpy as np

from .commutative_model import DiscreteSpace, FnElement
from .errors import DiagnosticError, DomainError, InputError
from .matrix_model import Projection, SpectrumSet, SymMatrix, maxabs, spectrum

INF = math.inf


class State:
    """Positive normalized linear functional.

    Use :meth:`trace` or :meth:`weights` to construct.
    """

    def __init__(self, kind, w=None, space=None, p=None):
        self.kind = kind
        self.w = w
        self.space = space
        self.p = p

    @classmethod
    def trace(cls, w: SymMatrix, atol=None):
        w = w if isinstance(w, SymMatrix) else SymMatrix(w)
        atol = w.tol if atol is None else atol
        lo = float(w.eigensystem().eigenvalues[0])
        if lo < -atol:
            raise DomainError(f"density matrix has negative eigenvalue {lo:.3e}")
        tr = float(np.trace(w.entries))
        if abs(tr - 1.0) > atol * max(1, w.dim):
            raise DomainError(f"density matrix trace is {tr!r}, not 1")
        return cls("trace", w=w)

    @classmethod
    def weights(cls, space: DiscreteSpace, p, atol=1e-12):
        p = tuple(p)
        if len(p) != len(space):
            raise InputError(f"expected {len(space)} weights, got {len(p)}")
        if any(v < 0 for v in p):
            raise DomainError("weights must be nonnegative")
        total = sum(p)
        if all(isinstance(v, Rational) for v in p):
            if total != 1:
                raise DomainError(f"weights sum to {total}, not 1")
        elif abs(total - 1) > atol:
            raise DomainError(f"weights sum to {total}, not 1")
        return cls("weights", space=space, p=p)

    @classmethod
    def point_mass(cls, space: DiscreteSpace, label):
        i = space.index(label)
        return cls.weights(space, tuple(1 if j == i else 0 for j in range(len(space))))

    @classmethod
    def vector(cls, psi):
        """Pure trace-form state of a unit vector."""
        psi = np.asarray(psi, dtype=float)
        psi = psi / np.linalg.norm(psi)
        return cls.trace(SymMatrix._wrap(np.outer(psi, psi)))

    def __call__(self, a):
        return evaluate(self, a)

    def __repr__(self):
        if self.kind == "trace":
            return f"State(trace, dim={self.w.dim})"
        return f"State(weights, {dict(zip(self.space.labels, self.p))})"


def convex_combination(states, coeffs) -> State:
    states = list(states)
    coeffs = list(coeffs)
    kinds = {s.kind for s in states}
    if len(kinds) != 1:
        raise InputError("cannot mix trace-form and weight-form states")
    if kinds == {"trace"}:
        acc = sum(c * s.w.entries for c, s in zip(coeffs, states))
        return State.trace(SymMatrix._wrap(acc, states[0].w.tol))
    space = states[0].space
    if any(s.space != space for s in states):
        raise InputError("space mismatch")
    p = tuple(sum(c * s.p[i] for c, s in zip(coeffs, states)) for i in range(len(space)))
    return State.weights(space, p)


def evaluate(rho: State, a):
    """``rho(a)``: ``trace(w a)`` or ``sum_x p(x) a(x)``."""
    if rho.kind == "trace":
        m = a.matrix if isinstance(a, Projection) else a
        if not isinstance(m, SymMatrix) or m.dim != rho.w.dim:
            raise InputError("state and element live in different models")
        return float(np.sum(rho.w.entries * m.entries))  # trace(w a) for symmetric w, a
    if not isinstance(a, FnElement) or a.space != rho.space:
        raise InputError("state and element live in different models")
    return sum(pi * v for pi, v in zip(rho.p, a.values))


# ------------------------------------------------------ extremal states


def _subsets(n):
    for r in range(n + 1):
        yield from combinations(range(n), r)


def is_extremal_commutative(rho: State):
    """Evaluate the four equivalent extremality criteria on a weight-form state.

    Returns ``(verdict, witnesses)``. The criteria are: point evaluation,
    multiplicativity, two-valuedness on characteristic elements, and the
    lattice-homomorphism test ``rho(a meet b) = min(rho(a), rho(b))`` on
    positive elements. Each is decided from finitely many generators of the
    model; all four are computed and a :class:`DiagnosticError` is raised if
    they disagree.
    """
    if rho.kind != "weights":
        raise InputError("extremality test applies to weight-form states")
    space = rho.space
    n = len(space)
    chi = [FnElement.indicator(space, [x]) for x in space.labels]
    wit: Dict[str, object] = {}

    # (2) point evaluation
    support = [x for x, v in zip(space.labels, rho.p) if v != 0]
    point = len(support) == 1 and rho.p[space.index(support[0])] == 1
    wit["point"] = support[0] if point else sorted(support)

    # (3) multiplicative on the basis of atom indicators (bilinearity does the rest)
    mult, mwit = True, None
    for i in range(n):
        for j in range(i, n):
            lhs = evaluate(rho, chi[i] * chi[j])
            rhs = evaluate(rho, chi[i]) * evaluate(rho, chi[j])
            if lhs != rhs:
                mult, mwit = False, {"a": space.labels[i], "b": space.labels[j], "rho(ab)": lhs, "rho(a)rho(b)": rhs}
                break
        if not mult:
            break
    wit["multiplicative"] = mwit

    # (4) two-valued on every projection (all subsets)
    two, twit = True, None
    for sub in _subsets(n):
        val = evaluate(rho, FnElement.indicator(space, [space.labels[k] for k in sub]))
        if val not in (0, 1):
            two, twit = False, {"set": [space.labels[k] for k in sub], "rho": val}
            break
    wit["two_valued"] = twit

    # (1) extremal, via the lattice-homomorphism test on positive generators
    lat, lwit = True, None
    gens = chi + [FnElement.constant(space, 1)]
    for a, b in combinations(gens, 2):
        lhs = evaluate(rho, a.inf(b))
        rhs = min(evaluate(rho, a), evaluate(rho, b))
        if lhs != rhs:
            lat, lwit = False, {"a": a.as_dict(), "b": b.as_dict(), "rho(a^b)": lhs, "min": rhs}
            break
    wit["lattice_homomorphism"] = lwit

    verdicts = {"point": point, "multiplicative": mult, "two_valued": two, "lattice_homomorphism": lat}
    if len(set(verdicts.values())) != 1:
        raise DiagnosticError("extremality criteria disagree", {"verdicts": verdicts, "witnesses": wit})
    return point, wit


# ------------------------------------------------------- Borel fragment


def _coerce_bound(v):
    if isinstance(v, str):
        v = v.strip().lower()
        if v in ("-inf", "-infinity"):
            return -INF
        if v in ("inf", "+inf", "infinity"):
            return INF
        raise InputError(f"bad interval bound {v!r}")
    if not isinstance(v, Real) or math.isnan(v):
        raise InputError(f"bad interval bound {v!r}")
    return float(v)


@dataclass(frozen=True)
class BorelSetExpr:
    """Finite union of half-open intervals ``(lo, hi]`` plus isolated points.

    The constructor canonicalizes: intervals sorted and merged, empty
    intervals and points already covered dropped.
    """

    intervals: Tuple[Tuple[float, float], ...] = ()
    points: Tuple[float, ...] = ()

    def __post_init__(self):
        ivs = []
        for pair in self.intervals:
            if len(pair) != 2:
                raise InputError("intervals are [lo, hi] pairs")
            lo, hi = (_coerce_bound(v) for v in pair)
            if lo == INF or hi == -INF:
                raise InputError("interval bounds must satisfy lo < +inf, hi > -inf")
            if lo < hi:
                ivs.append((lo, hi))
        ivs.sort()
        merged = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
            else:
                merged.append((lo, hi))
        pts = sorted({_coerce_bound(p) for p in self.points})
        pts = [p for p in pts if math.isfinite(p) and not any(lo < p <= hi for lo, hi in merged)]
        object.__setattr__(self, "intervals", tuple(merged))
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def empty(cls):
        return cls()

    @classmethod
    def real_line(cls):
        return cls(((-INF, INF),))

    @classmethod
    def half_line(cls, lam):
        """``(-inf, lam]``."""
        return cls(((-INF, lam),))

    @classmethod
    def singleton(cls, lam):
        return cls((), (lam,))

    def contains(self, t, point_tol=0.0) -> bool:
        if any(lo < t <= hi for lo, hi in self.intervals):
            return True
        return any(abs(t - p) <= point_tol for p in self.points)

    def union(self, other):
        return BorelSetExpr(self.intervals + other.intervals, self.points + other.points)

    def complement(self):
        """Complement in R; only defined for point-free expressions."""
        if self.points:
            raise InputError("complement of a set with isolated points is not half-open")
        out, cursor = [], -INF
        for lo, hi in self.intervals:
            if cursor < lo:
                out.append((cursor, lo))
            cursor = hi
        if cursor < INF:
            out.append((cursor, INF))
        return BorelSetExpr(tuple(out))

    def is_disjoint(self, other, point_tol=0.0) -> bool:
        for lo, hi in self.intervals:
            for lo2, hi2 in other.intervals:
                if max(lo, lo2) < min(hi, hi2):
                    return False
        return not any(other.contains(p, point_tol) for p in self.points) and not any(
            self.contains(p, point_tol) for p in other.points
        )


# -------------------------------------------------------- observables


@dataclass(frozen=True)
class Observable:
    """Projection-valued measure ``D -> xi_a(D)`` of a symmetric matrix."""

    source: SymMatrix
    support: SpectrumSet
    eigenprojections: Tuple[Projection, ...]
    point_tol: float

    @property
    def dim(self):
        return self.source.dim

    def cumulative(self, lam) -> Projection:
        """``xi((-inf, lam])``."""
        return measure_apply(self, BorelSetExpr.half_line(lam))


def observable_of(a: SymMatrix) -> Observable:
    es = a.eigensystem()
    projs = tuple(Projection.from_basis(cols, a.tol) for _, cols in es.clusters())
    return Observable(a, spectrum(a), projs, es.cluster_tol)


def measure_apply(xi: Observable, d: BorelSetExpr) -> Projection:
    """Sum of eigenprojections whose spectral point lies in ``d``.

    Isolated points of ``d`` match a spectral point within the observable's
    cluster tolerance; interval membership is exact.
    """
    if not isinstance(d, BorelSetExpr):
        raise InputError("expected a BorelSetExpr")
    cols = [p.basis for lam, p in zip(xi.support.points, xi.eigenprojections) if d.contains(lam, xi.point_tol)]
    if not cols:
        return Projection.zero(xi.dim, xi.source.tol)
    return Projection.from_basis(np.hstack(cols), xi.source.tol)


def distribution(rho: State, xi: Observable) -> List[Tuple[float, float]]:
    """``[(lambda, rho(xi({lambda})))]`` over the spectrum."""
    return [(lam, evaluate(rho, p)) for lam, p in zip(xi.support.points, xi.eigenprojections)]


def expectation(rho: State, a: SymMatrix) -> float:
    """``sum_lambda lambda * rho(xi_a({lambda}))``."""
    return math.fsum(lam * prob for lam, prob in distribution(rho, observable_of(a)))


def observables_agree(xi: Observable, eta: Observable, atol=1e-9) -> bool:
    """Compare two observables on ``(-inf, lam]`` at breakpoints and midpoints."""
    pts = sorted(set(xi.support.points) | set(eta.support.points))
    probes = pts + [(x + y) / 2 for x, y in zip(pts, pts[1:])] + [pts[0] - 1.0, pts[-1] + 1.0]
    return all(maxabs(xi.cumulative(t).entries - eta.cumulative(t).entries) <= atol for t in probes)
