"""Continuous functional calculus on symmetric matrices.

Three independent routes to ``f(a)``:

* :func:`func_calc_eigen` applies ``f`` to each clustered eigenvalue;
* :func:`func_calc_rs` sums ``f(tag) * (p_{t_j} - p_{t_{j-1}})`` over a mesh
  laid on the spectral resolution;
* :func:`func_calc_poly` evaluates a Bernstein (or interpolating) polynomial
  of ``f`` at ``a`` using only Jordan products.
"""
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .commutative_model import CharElement, DiscreteSpace, FnElement
from .errors import DiagnosticError, DomainError, InputError
from .matrix_model import (
    SpectrumSet,
    SymMatrix,
    commutes,
    jordan_product,
    maxabs,
    order_unit_norm,
    spectral_resolution,
    spectrum,
)
from .eigen import cluster_tolerance

TAG_RULES = ("right", "spectral")
POLY_MODES = ("bernstein", "interpolate")


@dataclass(frozen=True)
class RealFunction:
    """A real function given by an evaluator and a declared domain.

    ``lipschitz`` is either a constant or a callable ``(lo, hi) -> float``
    giving a Lipschitz constant on ``[lo, hi]``.
    """

    evaluator: Callable[[float], float]
    domain: Tuple[float, float] = (-math.inf, math.inf)
    lipschitz: object = None
    name: str = "f"
    coeffs: Optional[Tuple[float, ...]] = None

    def __call__(self, t):
        v = float(self.evaluator(float(t)))
        if not math.isfinite(v):
            raise DomainError(f"{self.name}({t!r}) is not finite")
        return v

    def lipschitz_on(self, lo, hi) -> Optional[float]:
        if self.lipschitz is None:
            return None
        if callable(self.lipschitz):
            return float(self.lipschitz(lo, hi))
        return float(self.lipschitz)

    def covers(self, lo, hi, slack=0.0) -> bool:
        return self.domain[0] - slack <= lo and hi <= self.domain[1] + slack


def _horner_scalar(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _poly_lipschitz(coeffs):
    def lip(lo, hi):
        m = max(abs(lo), abs(hi))
        return sum(k * abs(c) * m ** (k - 1) for k, c in enumerate(coeffs) if k > 0)

    return lip


def identity_fn():
    return RealFunction(lambda t: t, lipschitz=1.0, name="identity", coeffs=(0.0, 1.0))


def constant_fn(c):
    return RealFunction(lambda t: c, lipschitz=0.0, name=f"const({c})", coeffs=(float(c),))


def poly_fn(coeffs: Sequence[float]):
    """``c0 + c1 t + c2 t^2 + ...``."""
    coeffs = tuple(float(c) for c in coeffs)
    if not coeffs:
        raise InputError("poly needs at least one coefficient")
    return RealFunction(
        lambda t: _horner_scalar(coeffs, t),
        lipschitz=_poly_lipschitz(coeffs),
        name="poly(" + ",".join(repr(c) for c in coeffs) + ")",
        coeffs=coeffs,
    )


def clamp_fn(lo, hi):
    lo, hi = float(lo), float(hi)
    if lo > hi:
        raise InputError(f"clamp bounds reversed: {lo} > {hi}")
    return RealFunction(lambda t: min(max(t, lo), hi), lipschitz=1.0, name=f"clamp({lo!r},{hi!r})")


BUILTINS: Dict[str, RealFunction] = {
    "abs": RealFunction(abs, lipschitz=1.0, name="abs"),
    "exp": RealFunction(math.exp, lipschitz=lambda lo, hi: math.exp(hi), name="exp"),
    "square": RealFunction(
        lambda t: t * t, lipschitz=lambda lo, hi: 2.0 * max(abs(lo), abs(hi)), name="square", coeffs=(0.0, 0.0, 1.0)
    ),
    "identity": identity_fn(),
}

_CALL = re.compile(r"^\s*(\w+)\s*\((.*)\)\s*$")


def parse_function(text: str) -> RealFunction:
    """Parse ``abs``, ``exp``, ``square``, ``clamp(lo,hi)`` or ``poly(c0,c1,...)``."""
    text = text.strip()
    if text in BUILTINS:
        return BUILTINS[text]
    m = _CALL.match(text)
    if m is None:
        raise InputError(f"unknown function {text!r}")
    name, args = m.group(1), m.group(2)
    try:
        vals = [float(x) for x in args.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad arguments in {text!r}") from None
    if name == "clamp":
        if len(vals) != 2:
            raise InputError("clamp takes two bounds")
        return clamp_fn(*vals)
    if name == "poly":
        return poly_fn(vals)
    raise InputError(f"unknown function {name!r}")


# -------------------------------------------------------- eigen route


def _check_domain(a: SymMatrix, f: RealFunction):
    es = a.eigensystem()
    lo, hi = float(es.eigenvalues[0]), float(es.eigenvalues[-1])
    if not f.covers(lo, hi, es.cluster_tol):
        raise DomainError(f"spectrum [{lo!r}, {hi!r}] escapes the domain {f.domain} of {f.name}")
    return lo, hi


def func_calc_eigen(a: SymMatrix, f: RealFunction) -> SymMatrix:
    """``f(a) = sum_lambda f(lambda) P_lambda`` over clustered eigenvalues."""
    _check_domain(a, f)
    acc = np.zeros((a.dim, a.dim))
    for lam, cols in a.eigensystem().clusters():
        acc += f(lam) * (cols @ cols.T)
    return SymMatrix._wrap(acc, a.tol)


# ---------------------------------------------------- Riemann-Stieltjes


@dataclass(frozen=True)
class RiemannSum:
    """Mesh ``t_0 < ... < t_m``, one tag per cell ``(t_{j-1}, t_j]``, and the sum."""

    mesh: np.ndarray = field(repr=False)
    tags: np.ndarray = field(repr=False)
    value: SymMatrix

    @property
    def cells(self) -> int:
        return len(self.mesh) - 1


def rs_mesh(lower, upper, width) -> np.ndarray:
    """``lower - width, lower, lower + width, ...`` below ``upper``, then ``upper``."""
    if not width > 0:
        raise InputError(f"mesh width must be positive, got {width!r}")
    n = max(0, math.ceil((upper - lower) / width))
    inner = lower + width * np.arange(n, dtype=np.float64)
    inner = inner[inner < upper]
    return np.concatenate(([lower - width], inner, [upper]))


def riemann_sum(a: SymMatrix, f: RealFunction, mesh_width, tags="right") -> RiemannSum:
    """Riemann-Stieltjes sum of ``f`` against the spectral resolution of ``a``.

    ``tags="right"`` samples each cell at its right endpoint; ``"spectral"``
    samples at the largest breakpoint inside the cell (any point of the
    spectrum in the cell). Cells with zero increment contribute exactly zero,
    so only the cells holding a breakpoint are visited, in mesh order.
    """
    if tags not in TAG_RULES:
        raise InputError(f"tags must be one of {TAG_RULES}")
    _check_domain(a, f)
    res = spectral_resolution(a)
    mesh = rs_mesh(res.lower_bound, res.upper_bound, float(mesh_width))
    tag_pts = mesh[1:].copy()
    brk = np.asarray(res.breakpoints)
    # breakpoint i lies in cell (t_{j-1}, t_j] with j = cell[i]
    cell = np.searchsorted(mesh, brk, side="left")
    if tags == "spectral":
        for j, lam in zip(cell, brk):
            tag_pts[j - 1] = lam  # ascending, so the largest breakpoint in a cell wins
    acc = np.zeros((a.dim, a.dim))
    prev = np.zeros((a.dim, a.dim))
    for j in np.unique(cell):
        k = int(np.searchsorted(brk, mesh[j], side="right"))  # p_{t_j} is projections[k-1]
        cur = res.projections[k - 1].entries
        acc += f(tag_pts[j - 1]) * (cur - prev)
        prev = cur
    return RiemannSum(mesh, tag_pts, SymMatrix._wrap(acc, a.tol))


def func_calc_rs(a: SymMatrix, f: RealFunction, mesh_width, tags="right") -> SymMatrix:
    return riemann_sum(a, f, mesh_width, tags).value


# ----------------------------------------------------- polynomial route


def _affine(a: SymMatrix, shift, scale) -> SymMatrix:
    return SymMatrix._wrap((a.entries - shift * np.eye(a.dim)) * scale, a.tol)


def horner(a: SymMatrix, coeffs: Sequence[float]) -> SymMatrix:
    """``c0 + c1 a + c2 a^2 + ...`` by Horner's rule with Jordan products."""
    eye = SymMatrix.identity(a.dim, a.tol)
    acc = SymMatrix.zeros(a.dim, a.tol)
    for c in reversed(list(coeffs)):
        acc = jordan_product(acc, a) + float(c) * eye
    return acc


def bernstein_nodes(lo, hi, degree):
    return lo + (hi - lo) * np.arange(degree + 1) / degree


def bernstein_scalar(f: RealFunction, lo, hi, degree, t):
    """Scalar Bernstein polynomial of ``f`` on ``[lo, hi]`` at ``t`` (de Casteljau)."""
    if degree == 0 or hi == lo:
        return f(lo)
    s = (t - lo) / (hi - lo)
    beta = [f(x) for x in bernstein_nodes(lo, hi, degree)]
    for r in range(degree):
        beta = [(1 - s) * beta[k] + s * beta[k + 1] for k in range(degree - r)]
    return beta[0]


def func_calc_poly(a: SymMatrix, f: RealFunction, degree: int, mode="bernstein") -> SymMatrix:
    """Polynomial approximation of ``f(a)`` on ``[L_a, U_a]``.

    ``mode="bernstein"`` evaluates the degree-``n`` Bernstein polynomial by the
    de Casteljau recursion with matrix coefficients; ``mode="interpolate"``
    fits the polynomial through ``degree + 1`` Chebyshev points and evaluates
    it by Horner's rule, which reproduces polynomials of degree ``<= degree``.
    """
    if degree < 0 or int(degree) != degree:
        raise InputError(f"degree must be a nonnegative integer, got {degree!r}")
    if mode not in POLY_MODES:
        raise InputError(f"mode must be one of {POLY_MODES}")
    degree = int(degree)
    lo, hi = _check_domain(a, f)
    eye = SymMatrix.identity(a.dim, a.tol)
    if hi - lo <= a.eigensystem().cluster_tol:
        return f(0.5 * (lo + hi)) * eye
    if degree == 0:
        return (f(lo) if mode == "bernstein" else f(0.5 * (lo + hi))) * eye
    if mode == "bernstein":
        s = _affine(a, lo, 1.0 / (hi - lo))
        t = eye - s
        beta = [f(x) * eye for x in bernstein_nodes(lo, hi, degree)]
        for r in range(degree):
            beta = [jordan_product(t, beta[k]) + jordan_product(s, beta[k + 1]) for k in range(degree - r)]
        return beta[0]
    # interpolation in the variable u = (2t - lo - hi) / (hi - lo) on [-1, 1]
    u_nodes = np.cos((2 * np.arange(degree + 1) + 1) * np.pi / (2 * degree + 2))
    t_nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * u_nodes
    coeffs = np.polynomial.polynomial.polyfit(u_nodes, [f(x) for x in t_nodes], degree)
    u = _affine(a, 0.5 * (lo + hi), 2.0 / (hi - lo))
    return horner(u, coeffs)


# ---------------------------------------------------- spectral mapping


def spectral_mapping(a: SymMatrix, f: RealFunction) -> SpectrumSet:
    """``{f(lambda) : lambda in spec(a)}``, clustered like a spectrum."""
    spec = spectrum(a)
    vals = sorted((f(lam), m) for lam, m in zip(spec.points, spec.multiplicities))
    tol = cluster_tolerance(max(abs(v) for v, _ in vals))
    points, mults, group = [], [], []
    for v, m in vals:
        if group and v - group[-1][0] > tol:
            points.append(float(np.mean([g for g, _ in group])))
            mults.append(sum(k for _, k in group))
            group = []
        group.append((v, m))
    points.append(float(np.mean([g for g, _ in group])))
    mults.append(sum(k for _, k in group))
    return SpectrumSet(tuple(points), tuple(mults))


def same_spectrum(s1: SpectrumSet, s2: SpectrumSet, atol=None) -> bool:
    if len(s1.points) != len(s2.points) or s1.multiplicities != s2.multiplicities:
        return False
    atol = cluster_tolerance(max(s1.norm, s2.norm)) if atol is None else atol
    return all(abs(x - y) <= atol for x, y in zip(s1.points, s2.points))


# ------------------------------------------------------ pushforward


@dataclass(frozen=True)
class Pushforward:
    """Joint diagonalization of commuting ``a, b`` as functions on atoms.

    ``basis`` holds one joint eigenvector per atom; ``represent(c)`` is the
    diagonal of ``basis^T c basis`` as an :class:`FnElement`.
    """

    space: DiscreteSpace
    basis: np.ndarray = field(repr=False)
    a_values: FnElement
    b_values: FnElement
    resolution_images: Dict[float, CharElement]

    def represent(self, c, tol=1e-8) -> FnElement:
        m = c.entries if hasattr(c, "entries") else np.asarray(c, dtype=float)
        d = self.basis.T @ m @ self.basis
        off = maxabs(d - np.diag(np.diag(d)))
        if off > tol * max(1.0, maxabs(m)):
            raise DomainError(f"element is not diagonal in the joint basis (off-diagonal {off:.3e})")
        return FnElement(self.space, tuple(float(x) for x in np.diag(d)))


def _joint_basis(a: SymMatrix, b: SymMatrix) -> np.ndarray:
    cols = []
    for _, va in a.eigensystem().clusters():
        sub = SymMatrix._wrap(va.T @ b.entries @ va)
        cols.append(va @ sub.eigensystem().eigenvectors)
    return np.hstack(cols)


def pushforward_resolution(a: SymMatrix, b: SymMatrix, probes=None) -> Pushforward:
    """Check that the resolution of ``b`` pushes forward to indicators ``{g <= lambda}``.

    ``b`` must commute with ``a`` (the double commutant is not searched; any
    commuting ``b`` is accepted). Atoms are the joint eigenvectors ordered by
    ``a``'s eigenvalue then ``b``'s. Each ``p_{b,lambda}`` at the probe values
    (default: breakpoints of ``b``, midpoints, and one point below) must be
    represented by a 0/1 function equal to the indicator of ``{x : g(x) <= lambda}``
    where ``g`` represents ``b``.
    """
    if not commutes(a, b):
        raise DomainError("pushforward needs commuting a and b")
    basis = _joint_basis(a, b)
    space = DiscreteSpace.of_size(a.dim)
    draft = Pushforward(space, basis, None, None, {})
    a_vals = draft.represent(a)
    g = draft.represent(b)
    res = spectral_resolution(b)
    tol = b.eigensystem().cluster_tol
    if probes is None:
        brk = list(res.breakpoints)
        probes = [brk[0] - 1.0] + brk + [(x + y) / 2 for x, y in zip(brk, brk[1:])]
    images = {}
    for lam in sorted(float(x) for x in probes):
        img = draft.represent(res.at(lam))
        rounded = FnElement(space, tuple(1 if v > 0.5 else 0 for v in img.values))
        if maxabs(np.subtract(img.values, rounded.values)) > 1e-8:
            raise DiagnosticError(f"image of p_(b,{lam}) is not characteristic", {"values": img.values})
        expected = FnElement(space, tuple(1 if v <= lam + tol else 0 for v in g.values))
        if rounded != expected:
            raise DiagnosticError(
                f"image of p_(b,{lam}) differs from the indicator of g <= lambda",
                {"image": rounded.values, "expected": expected.values},
            )
        images[lam] = CharElement(rounded)
    return Pushforward(space, basis, a_vals, g, images)
