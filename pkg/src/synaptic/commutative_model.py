"""Functions on a finite discrete Stone space: the commutative model C(X, R).

Values are kept as given (``int``, ``float`` or :class:`fractions.Fraction`),
so with rational inputs every lattice, MV and vector-lattice identity holds
exactly rather than up to rounding.
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence, Tuple

from .errors import DomainError, InputError


@dataclass(frozen=True)
class DiscreteSpace:
    """Finite set of atoms; every subset is clopen."""

    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise InputError("a discrete space needs at least one atom")
        if len(set(labels)) != len(labels):
            raise InputError("atom labels must be unique")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n, prefix="x"):
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown atom {label!r}") from None


def _num(v):
    if isinstance(v, bool) or not isinstance(v, Real):
        raise InputError(f"value {v!r} is not a real number")
    return v


@dataclass(frozen=True)
class FnElement:
    """A real function on a :class:`DiscreteSpace`, one value per atom."""

    space: DiscreteSpace
    values: Tuple[Real, ...]

    def __post_init__(self):
        values = tuple(_num(v) for v in self.values)
        if len(values) != len(self.space):
            raise InputError(f"expected {len(self.space)} values, got {len(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, space, c):
        return cls(space, (c,) * len(space))

    @classmethod
    def from_mapping(cls, space, mapping, default=0):
        unknown = set(mapping) - set(space.labels)
        if unknown:
            raise InputError(f"unknown atoms {sorted(unknown)}")
        return cls(space, tuple(mapping.get(x, default) for x in space.labels))

    @classmethod
    def indicator(cls, space, subset):
        subset = set(subset)
        unknown = subset - set(space.labels)
        if unknown:
            raise InputError(f"unknown atoms {sorted(unknown)}")
        return cls(space, tuple(1 if x in subset else 0 for x in space.labels))

    def __getitem__(self, label):
        return self.values[self.space.index(label)]

    def as_dict(self):
        return dict(zip(self.space.labels, self.values))

    def _zip(self, other):
        if not isinstance(other, FnElement):
            raise InputError("expected an FnElement")
        if other.space != self.space:
            raise InputError("space mismatch")
        return zip(self.values, other.values)

    def _map(self, fn):
        return FnElement(self.space, tuple(fn(v) for v in self.values))

    def __add__(self, other):
        if isinstance(other, Real):
            return self._map(lambda v: v + other)
        return FnElement(self.space, tuple(x + y for x, y in self._zip(other)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Real):
            return self._map(lambda v: v - other)
        return FnElement(self.space, tuple(x - y for x, y in self._zip(other)))

    def __rsub__(self, other):
        return self._map(lambda v: other - v)

    def __neg__(self):
        return self._map(lambda v: -v)

    def __mul__(self, other):
        # pointwise product; scalars act by scaling
        if isinstance(other, Real):
            return self._map(lambda v: other * v)
        return FnElement(self.space, tuple(x * y for x, y in self._zip(other)))

    __rmul__ = __mul__

    def __abs__(self):
        return self._map(abs)

    def leq(self, other) -> bool:
        return all(x <= y for x, y in self._zip(other))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def sup(self, other):
        return FnElement(self.space, tuple(max(x, y) for x, y in self._zip(other)))

    def inf(self, other):
        return FnElement(self.space, tuple(min(x, y) for x, y in self._zip(other)))

    def pos(self):
        return self._map(lambda v: max(v, 0))

    def neg(self):
        return self._map(lambda v: max(-v, 0))

    def sup_norm(self):
        return max(abs(v) for v in self.values)

    def support(self):
        """``N(f) = {x : f(x) != 0}``."""
        return frozenset(x for x, v in zip(self.space.labels, self.values) if v != 0)

    def carrier(self) -> "CharElement":
        return CharElement(FnElement.indicator(self.space, self.support()))

    def spectrum(self):
        """The value set, ascending."""
        return tuple(sorted(set(self.values)))

    def restrict(self, space: DiscreteSpace):
        return FnElement(space, tuple(self[x] for x in space.labels))


@dataclass(frozen=True)
class CharElement:
    """A {0,1}-valued FnElement, i.e. the indicator of a (clopen) subset."""

    underlying: FnElement

    def __post_init__(self):
        if not is_characteristic(self.underlying):
            raise InputError("characteristic elements take only the values 0 and 1")

    @classmethod
    def of(cls, space, subset):
        return cls(FnElement.indicator(space, subset))

    @property
    def space(self):
        return self.underlying.space

    @property
    def set(self):
        return frozenset(x for x, v in self.underlying.as_dict().items() if v == 1)

    def complement(self):
        return CharElement(1 - self.underlying)

    def meet(self, other):
        return CharElement(self.underlying.inf(other.underlying))

    def join(self, other):
        return CharElement(self.underlying.sup(other.underlying))


def lattice_ops(f: FnElement, g: FnElement):
    """Pointwise ``(max(f, g), min(f, g))``."""
    return f.sup(g), f.inf(g)


def _half(x):
    # exact halving for rationals, ordinary division otherwise
    if isinstance(x, (int, Fraction)):
        return Fraction(x) / 2
    return x / 2


def abs_closed_form(f: FnElement, g: FnElement):
    """``(f meet g, f join g)`` from ``(f + g -/+ |f - g|) / 2``."""
    s = f + g
    d = abs(f - g)
    meet = FnElement(f.space, tuple(_half(x - y) for x, y in zip(s.values, d.values)))
    join = FnElement(f.space, tuple(_half(x + y) for x, y in zip(s.values, d.values)))
    return meet, join


def _check_effect(*fs):
    for f in fs:
        if not all(0 <= v <= 1 for v in f.values):
            raise DomainError("effects must take values in [0, 1]")


def mv_oplus(e: FnElement, f: FnElement) -> Optional[FnElement]:
    """Partial effect-algebra sum: ``e + f`` if ``e + f <= 1``, else ``None``."""
    _check_effect(e, f)
    s = e + f
    return s if all(v <= 1 for v in s.values) else None


def mv_truncated_sum(e: FnElement, f: FnElement) -> FnElement:
    """Total MV (tribe) sum ``min(e + f, 1)``."""
    _check_effect(e, f)
    return FnElement(e.space, tuple(min(v, 1) for v in (e + f).values))


def mv_complement(e: FnElement) -> FnElement:
    _check_effect(e)
    return 1 - e


def is_characteristic(e: FnElement) -> bool:
    return all(min(v, 1 - v) == 0 for v in e.values)


def simple_decompose(f: FnElement):
    """Write ``f`` as sum of c_i * chi_i over disjoint supports.

    Terms come in ascending order of coefficient; zero coefficients are
    dropped.
    """
    out = []
    for c in sorted(set(f.values)):
        if c == 0:
            continue
        subset = [x for x, v in zip(f.space.labels, f.values) if v == c]
        out.append((c, CharElement.of(f.space, subset)))
    return out


def recompose(terms, space):
    acc = FnElement.constant(space, 0)
    for c, chi in terms:
        acc = acc + c * chi.underlying
    return acc


def monotone_sup(seq: Sequence[FnElement], bound: Optional[FnElement] = None) -> FnElement:
    """Pointwise supremum of an ascending, bounded sequence.

    For a finite prefix the supremum is its last element; the ascending and
    bounded contract is validated rather than assumed.
    """
    seq = list(seq)
    if not seq:
        raise DomainError("monotone_sup needs a nonempty sequence")
    for prev, nxt in zip(seq, seq[1:]):
        if not prev.leq(nxt):
            raise DomainError("sequence is not ascending")
    if bound is not None and not seq[-1].leq(bound):
        raise DomainError("sequence exceeds the supplied bound")
    return seq[-1]


def distributive(p: FnElement, q: FnElement, r: FnElement) -> bool:
    return p.inf(q.sup(r)) == p.inf(q).sup(p.inf(r))


def dedekind(f: FnElement, g: FnElement) -> bool:
    s, i = lattice_ops(f, g)
    return s + i == f + g


def norm_bound_equivalence(f: FnElement, eps) -> bool:
    """``|f| <= eps * 1`` iff ``||f|| <= eps`` (both sides evaluated)."""
    lhs = abs(f).leq(FnElement.constant(f.space, eps))
    rhs = f.sup_norm() <= eps
    return lhs == rhs
