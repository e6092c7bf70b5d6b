"""Desk-scale Loomis-Sikorski representation.

A :class:`GroundSet` splits a finite set into essential atoms and a designated
negligible part. The maximal gh-tribe of bounded functions on the ground set
maps onto C(atoms, R) by restriction; its kernel is exactly the functions
supported inside the negligible part.

Generated tribes are described exactly. On a finite ground set, a closed
MV-subalgebra of [0,1]^X is fixed by (a) which points it cannot separate and
(b) for each block of inseparable points, the value set it allows there:
``{0, 1/d, ..., 1}`` when every seed value on the block is rational with
common denominator ``d``, or all of [0,1] otherwise. Vector-lattice modes
(gh-tribe, convex tribe) only keep the block structure.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isfinite
from numbers import Rational, Real
from typing import Dict, List, Optional, Tuple

from .commutative_model import CharElement, DiscreteSpace, FnElement
from .errors import DomainError, InputError

MODES = ("tribe", "convex_tribe", "gh_tribe")


@dataclass(frozen=True)
class GroundSet:
    atoms: Tuple[str, ...]
    null_part: Tuple[str, ...] = ()

    def __post_init__(self):
        atoms = tuple(str(x) for x in self.atoms)
        null = tuple(str(x) for x in self.null_part)
        if not atoms:
            raise InputError("ground set needs at least one essential atom")
        if set(atoms) & set(null):
            raise InputError("atoms and negligible points must be disjoint")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "null_part", null)
        # DiscreteSpace validates uniqueness
        object.__setattr__(self, "_space", DiscreteSpace(atoms + null))

    @property
    def space(self) -> DiscreteSpace:
        return self._space

    @property
    def atom_space(self) -> DiscreteSpace:
        return DiscreteSpace(self.atoms)

    def function(self, mapping, default=0) -> FnElement:
        """Build a function on the ground set from a label -> value map."""
        return FnElement.from_mapping(self.space, mapping, default)


@dataclass(frozen=True)
class GhTribeModel:
    """The maximal gh-tribe ``T_b``: all bounded functions on the ground set."""

    ground: GroundSet

    def contains(self, f: FnElement) -> bool:
        if f.space != self.ground.space:
            return False
        return all(isfinite(v) for v in f.values)


@dataclass(frozen=True)
class SigmaField:
    """``B(T) = {D : chi_D in T}``; on a finite ground set every subset."""

    ground: GroundSet

    def contains(self, subset) -> bool:
        return set(subset) <= set(self.ground.space.labels)

    def is_measurable(self, f: FnElement) -> bool:
        # preimages of Borel sets are subsets of a finite set
        return f.space == self.ground.space

    def preimage(self, f: FnElement, predicate) -> frozenset:
        return frozenset(x for x, v in f.as_dict().items() if predicate(v))


@dataclass(frozen=True)
class QuotientMorphism:
    """Restriction ``h: T_b -> C(atoms, R)`` with kernel ``{f : N(f) within null}``."""

    source: GhTribeModel

    @classmethod
    def over(cls, ground: GroundSet):
        return cls(GhTribeModel(ground))

    @property
    def ground(self) -> GroundSet:
        return self.source.ground

    @property
    def target_space(self) -> DiscreteSpace:
        return self.ground.atom_space

    def _check(self, f):
        if not self.source.contains(f):
            raise InputError("function is not a bounded function on the ground set")

    def __call__(self, f: FnElement) -> FnElement:
        return apply_h(self, f)

    def in_kernel(self, f: FnElement) -> bool:
        self._check(f)
        return f.support() <= set(self.ground.null_part)

    def lift(self, g: FnElement) -> FnElement:
        """A preimage of ``g``: extend by zero on the negligible part."""
        if g.space != self.target_space:
            raise InputError("lift expects a function on the essential atoms")
        return self.ground.function(g.as_dict())


def apply_h(m: QuotientMorphism, f: FnElement) -> FnElement:
    m._check(f)
    return f.restrict(m.target_space)


def is_regular(m: QuotientMorphism, f: FnElement) -> bool:
    """Truth of ``h(f) = 0  <=>  h(chi_{N(f)}) = 0`` for this ``f``."""
    lhs = apply_h(m, f).is_zero()
    rhs = apply_h(m, f.carrier().underlying).is_zero()
    return lhs == rhs


def observable_preimage(m: QuotientMorphism, f: FnElement, predicate) -> CharElement:
    """``h(chi_{f^{-1}(D)})`` for a Borel set ``D`` given by its membership test."""
    pre = SigmaField(m.ground).preimage(f, predicate)
    return CharElement(apply_h(m, FnElement.indicator(m.ground.space, pre)))


# ---------------------------------------------------------------- states


def validate_weights(ground: GroundSet, rho: Dict[str, Real], atol=1e-12):
    unknown = set(rho) - set(ground.space.labels)
    if unknown:
        raise DomainError(f"weights on unknown points {sorted(unknown)}")
    w = {x: rho.get(x, 0) for x in ground.space.labels}
    if any(v < 0 for v in w.values()):
        raise DomainError("weights must be nonnegative")
    total = sum(w.values())
    exact = all(isinstance(v, Rational) for v in w.values())
    if (total != 1) if exact else abs(total - 1) > atol:
        raise DomainError(f"weights must sum to 1, got {total}")
    if any(w[x] != 0 for x in ground.null_part):
        raise DomainError("sigma-additive states vanish on negligible points")
    return w


def state_integral(ground: GroundSet, rho: Dict[str, Real], f: FnElement):
    """``rho(f) = sum_x f(x) mu({x})``."""
    w = validate_weights(ground, rho)
    if f.space != ground.space:
        raise InputError("function is not defined on the ground set")
    return sum(w[x] * v for x, v in zip(f.space.labels, f.values))


def measure(ground: GroundSet, rho: Dict[str, Real], subset):
    """``mu(D) = rho(chi_D)``."""
    return state_integral(ground, rho, FnElement.indicator(ground.space, subset))


# --------------------------------------------------------- generated tribes


def _exact(v):
    # every float is a dyadic rational; Fraction(v) is exact
    return v if isinstance(v, Rational) else Fraction(v)


@dataclass(frozen=True)
class TribeClosure:
    """Membership oracle for a generated tribe, convex tribe or gh-tribe.

    ``blocks`` partitions the ground labels into classes the generated family
    cannot separate; ``denominators`` gives, per block, the ``d`` with allowed
    values ``k/d`` (``None`` means every value in the admissible range).
    ``trace`` records the refinement steps.
    """

    mode: str
    space: DiscreteSpace
    blocks: Tuple[Tuple[str, ...], ...]
    denominators: Tuple[Optional[int], ...]
    trace: Tuple[str, ...] = field(default=(), compare=False)

    def contains(self, f: FnElement) -> bool:
        if f.space != self.space:
            return False
        vals = f.as_dict()
        if self.mode == "gh_tribe":
            if not all(isfinite(v) for v in vals.values()):
                return False
        elif not all(0 <= v <= 1 for v in vals.values()):
            return False
        for block, d in zip(self.blocks, self.denominators):
            first = vals[block[0]]
            if any(vals[x] != first for x in block[1:]):
                return False
            if d is not None and (_exact(first) * d).denominator != 1:
                return False
        return True

    __contains__ = contains


def _lcm(a, b):
    return a * b // gcd(a, b)


def tribe_generate(seeds: List[FnElement], mode: str, space: DiscreteSpace) -> TribeClosure:
    """The least family of the given mode containing ``seeds``.

    Blocks are found by refining the trivial partition with each seed in turn
    until no seed splits a block (a fixpoint). For ``mode == "tribe"`` the
    per-block value lattice is then the MV-algebra generated by the seed
    values there, which is finite exactly when those values are rational.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    for f in seeds:
        if f.space != space:
            raise InputError("seed is not defined on the ground space")
        if mode == "gh_tribe":
            if not all(isfinite(v) for v in f.values):
                raise DomainError("gh-tribe seeds must be bounded")
        elif not all(0 <= v <= 1 for v in f.values):
            raise DomainError("tribe seeds must take values in [0, 1]")

    blocks = [tuple(space.labels)]
    trace = [f"start: one block of {len(space)} points"]
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(seeds):
            vals = f.as_dict()
            refined = []
            for block in blocks:
                groups: Dict = {}
                for x in block:
                    groups.setdefault(vals[x], []).append(x)
                refined.extend(tuple(g) for g in groups.values())
            if len(refined) != len(blocks):
                trace.append(f"seed {i} splits into {len(refined)} blocks")
                blocks, changed = refined, True

    if mode != "tribe":
        dens = (None,) * len(blocks)
    else:
        dens = []
        for block in blocks:
            d = 1
            for f in seeds:
                v = f[block[0]]
                if not isinstance(v, (Rational, float)):
                    d = None  # treated as irrational: dense, closure is [0,1]
                    break
                d = _lcm(d, _exact(v).denominator)
            dens.append(d)
            trace.append(f"block {block}: values in L_{d}" if d else f"block {block}: values in [0,1]")
        dens = tuple(dens)
    return TribeClosure(mode, space, tuple(blocks), dens, tuple(trace))


def mv_closure_bruteforce(seeds: List[FnElement], space: DiscreteSpace, limit=100000):
    """Enumerate the MV-algebra generated by rational seeds (tests/oracle use).

    Fixpoint of complement and truncated sum starting from ``{0} + seeds``.
    """
    start = {tuple(Fraction(0) for _ in space.labels)}
    start |= {tuple(_exact(v) for v in f.values) for f in seeds}
    members = set(start)
    frontier = set(start)
    while frontier:
        new = set()
        for a in frontier:
            c = tuple(1 - v for v in a)
            if c not in members:
                new.add(c)
            for b in members:
                s = tuple(min(x + y, 1) for x, y in zip(a, b))
                if s not in members:
                    new.add(s)
        members |= new
        frontier = new
        if len(members) > limit:
            raise DomainError("closure too large to enumerate")
    return {FnElement(space, m) for m in members}


# ------------------------------------------------------------ morphism audit


def audit_morphism(m: QuotientMorphism, pairs, scalars=(Fraction(-3, 2), Fraction(2, 3))):
    """Check the GH-morphism clauses of ``h`` on ``(f, g)`` pairs.

    Returns a mapping ``law -> [passed, failed, first_witness]``. Everything is
    compared exactly, so rational inputs give a verdict free of tolerances.
    """
    ground = m.ground
    one = FnElement.constant(ground.space, 1)
    laws = {
        k: [0, 0, None]
        for k in (
            "linear",
            "unital",
            "multiplicative",
            "carrier",
            "sup",
            "surjective",
            "regular",
            "kernel",
        )
    }

    def record(law, ok, witness):
        entry = laws[law]
        entry[0 if ok else 1] += 1
        if not ok and entry[2] is None:
            entry[2] = witness

    alpha, beta = scalars
    for f, g in pairs:
        hf, hg = apply_h(m, f), apply_h(m, g)
        wit = {"f": f.as_dict(), "g": g.as_dict()}
        record("linear", apply_h(m, alpha * f + beta * g) == alpha * hf + beta * hg, wit)
        record("unital", apply_h(m, one) == FnElement.constant(m.target_space, 1), wit)
        record("multiplicative", apply_h(m, f * g) == hf * hg, wit)
        record("carrier", apply_h(m, f.carrier().underlying) == hf.carrier().underlying, wit)
        # ascending bounded sequence f, f v g, f v g v (g + 1), ...
        seq = [f, f.sup(g), f.sup(g).sup(g + 1)]
        record(
            "sup",
            apply_h(m, seq[-1]) == hf.sup(hg).sup(hg + 1)
            and all(apply_h(m, a).leq(apply_h(m, b)) for a, b in zip(seq, seq[1:])),
            wit,
        )
        record("surjective", apply_h(m, m.lift(hf)) == hf, wit)
        record("regular", is_regular(m, f) and is_regular(m, g), wit)
        null_only = ground.function({x: f[x] for x in ground.null_part})
        record("kernel", m.in_kernel(null_only) and (m.in_kernel(f) == hf.is_zero()), wit)
    return laws
