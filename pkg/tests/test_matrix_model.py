import math

import numpy as np
import pytest
from hypothesis import given

from synaptic.errors import DiagnosticError, DomainError, InputError, NotInvertibleError
from synaptic.generators import random_orthogonal, random_psd
from synaptic.matrix_model import (
    Projection,
    SymMatrix,
    abs_pos_neg,
    carrier,
    commutes,
    invert,
    invert_threshold,
    is_invertible,
    jordan_product,
    leq,
    order_unit_norm,
    pos_part,
    power,
    quadratic_map,
    resolution_projection,
    spectral_resolution,
    spectrum,
    sqrt_psd,
)

import oracles
from strategies import rng_and_dim, sym_matrices

D = SymMatrix.diag


def close(x, y, atol=1e-12):
    x = x.entries if hasattr(x, "entries") else np.asarray(x, dtype=float)
    y = y.entries if hasattr(y, "entries") else np.asarray(y, dtype=float)
    return np.max(np.abs(x - y)) <= atol


# ------------------------------------------------------------ construction


def test_rejects_asymmetric_and_bad_shapes():
    with pytest.raises(InputError, match="symmetry defect"):
        SymMatrix([[1, 2], [0, 1]])
    with pytest.raises(InputError):
        SymMatrix([[1, 2, 3]])
    with pytest.raises(InputError):
        SymMatrix([[np.nan]])


def test_symmetrizes_within_tol_and_is_immutable():
    a = SymMatrix([[1, 2 + 1e-12], [2, 1]])
    assert a.entries[0, 1] == a.entries[1, 0]
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5


def test_dim_one_scalar():
    a = SymMatrix(3.0)
    assert a.dim == 1 and order_unit_norm(a) == 3.0
    assert close(invert(a), [[1 / 3]])


# ------------------------------------------------------------- examples


def test_jordan_product_examples():
    assert close(jordan_product(D([1, 2]), D([3, 4])), D([3, 8]))
    a = SymMatrix([[2, 1], [1, 2]])
    assert close(jordan_product(a, SymMatrix.identity(2)), a)
    assert close(jordan_product(SymMatrix([[0, 1], [1, 0]]), D([1, -1])), np.zeros((2, 2)))


def test_quadratic_map_examples():
    b = SymMatrix([[1, 2], [2, -3]])
    assert close(quadratic_map(SymMatrix.identity(2), b), b)
    assert close(quadratic_map(D([2, 3]), D([1, 1])), D([4, 9]))
    assert close(quadratic_map(SymMatrix([[0, 1], [1, 0]]), D([1, 0])), D([0, 1]))


def test_sqrt_examples():
    assert close(sqrt_psd(D([4, 9])), D([2, 3]))
    assert close(sqrt_psd(SymMatrix.identity(3)), np.eye(3))
    r3 = math.sqrt(3)
    expected = 0.5 * np.array([[r3 + 1, r3 - 1], [r3 - 1, r3 + 1]])
    assert close(sqrt_psd(SymMatrix([[2, 1], [1, 2]])), expected, 1e-14)
    with pytest.raises(DomainError):
        sqrt_psd(D([1, -1]))


def test_abs_pos_neg_examples():
    absval, pos, neg = abs_pos_neg(D([-1, 2]))
    assert close(absval, D([1, 2])) and close(pos, D([0, 2])) and close(neg, D([1, 0]))
    for m in abs_pos_neg(SymMatrix.zeros(3)):
        assert close(m, np.zeros((3, 3)))
    absval, _, _ = abs_pos_neg(SymMatrix([[0, 1], [1, 0]]))
    assert close(absval, np.eye(2), 1e-14)


def test_carrier_examples():
    assert close(carrier(D([0, 3, -2])), D([0, 1, 1]))
    assert carrier(SymMatrix.zeros(2)).rank == 0
    v = np.array([1.0, 1.0]) / math.sqrt(2)
    assert close(carrier(SymMatrix(np.outer(v, v))), [[0.5, 0.5], [0.5, 0.5]], 1e-14)


def test_resolution_examples():
    res = spectral_resolution(D([1, 1, 3]))
    assert res.breakpoints == (1.0, 3.0)
    assert close(res.projections[0], D([1, 1, 0])) and close(res.projections[1], np.eye(3))
    res = spectral_resolution(SymMatrix.zeros(2))
    assert res.breakpoints == (0.0,) and close(res.projections[0], np.eye(2))
    res = spectral_resolution(D([-2, 5]))
    assert res.breakpoints == (-2.0, 5.0)
    assert close(res.projections[0], D([1, 0]))
    assert (res.lower_bound, res.upper_bound) == (-2.0, 5.0)


def test_resolution_step_values():
    res = spectral_resolution(D([-2, 5]))
    assert res.at(-3).rank == 0
    assert res.at(-2).rank == 1  # right-continuous: includes the eigenspace at the breakpoint
    assert res.at(4.99).rank == 1 and res.at(5).rank == 2 and res.at(1e9).rank == 2


def test_spectrum_examples():
    s = spectrum(D([1, 2, 2]))
    assert s.points == (1.0, 2.0) and s.multiplicities == (1, 2)
    assert spectrum(SymMatrix.identity(4)).points == (1.0,)
    s = spectrum(SymMatrix([[2, 1], [1, 2]]))
    assert np.allclose(s.points, [1.0, 3.0], atol=1e-15)
    assert 3.0 in s and 2.0 not in s


def test_invert_examples():
    assert close(invert(D([2, 4])), D([0.5, 0.25]))
    assert close(invert(SymMatrix.identity(2)), np.eye(2))
    with pytest.raises(NotInvertibleError) as exc:
        invert(D([1, 0]))
    assert exc.value.min_abs_spec == 0.0


def test_norm_examples():
    assert order_unit_norm(D([-3, 2])) == 3.0
    assert order_unit_norm(SymMatrix.zeros(2)) == 0.0
    assert order_unit_norm(SymMatrix([[2, 1], [1, 2]])) == pytest.approx(3.0, abs=1e-15)


def test_commutes_examples():
    assert commutes(D([1, 2]), D([3, 4]))
    a = SymMatrix([[2, 1], [1, 2]])
    assert commutes(a, jordan_product(a, a))
    assert not commutes(SymMatrix([[0, 1], [1, 0]]), D([1, 0]))


def test_leq_examples():
    a = SymMatrix([[2, 1], [1, 2]])
    assert leq(SymMatrix.zeros(2), jordan_product(a, a))
    assert not leq(D([1, 5]), D([2, 4]))
    assert leq(-order_unit_norm(a) * SymMatrix.identity(2), a)


def test_power():
    a = SymMatrix([[1, 2], [2, 0]])
    assert close(power(a, 3), a.entries @ a.entries @ a.entries, 1e-12)
    with pytest.raises(DomainError):
        power(a, -1)


def test_projection_checks_idempotence():
    with pytest.raises(InputError, match="idempotence"):
        Projection([[1, 0.1], [0.1, 0]])
    p = Projection([[0.5, 0.5], [0.5, 0.5]], rank=1)
    assert p.rank == 1
    with pytest.raises(InputError):
        Projection(np.eye(2), rank=1)


# ------------------------------------------------------------- properties


@given(sym_matrices())
def test_sa2_squares_are_positive(a):
    assert leq(SymMatrix.zeros(a.dim), jordan_product(a, a), 1e-9 * max(1, order_unit_norm(a)) ** 2)


@given(rng_and_dim())
def test_sa3_quadratic_map_positive_and_equals_aba(rd):
    rng, n = rd
    x = rng.standard_normal((n, n))
    a = SymMatrix((x + x.T) / 2)
    b = random_psd(rng, n)
    q = quadratic_map(a, b)
    s = max(1, order_unit_norm(a)) ** 2 * max(1, order_unit_norm(b))
    assert close(q, a.entries @ b.entries @ a.entries, 1e-12 * s)
    assert np.linalg.eigvalsh(q.entries).min() >= -1e-12 * s


@given(rng_and_dim())
def test_sa4_aba_zero_forces_ab_zero(rd):
    rng, n = rd
    q = random_orthogonal(rng, n)
    k = int(rng.integers(0, n + 1))
    a = SymMatrix((q * np.r_[np.zeros(k), rng.uniform(1, 2, n - k)]) @ q.T, 1e-9)
    b = SymMatrix((q * np.r_[rng.uniform(0, 2, k), np.zeros(n - k)]) @ q.T, 1e-9)
    assert np.abs(quadratic_map(a, b).entries).max() <= 1e-10
    assert np.abs(a.entries @ b.entries).max() <= 1e-9


@given(rng_and_dim())
def test_sqrt_square_positive_and_unique(rd):
    rng, n = rd
    b = random_psd(rng, n)
    r = sqrt_psd(b)
    s = max(1, order_unit_norm(b))
    assert close(r.entries @ r.entries, b, 1e-9 * s)
    assert np.linalg.eigvalsh(r.entries).min() >= -1e-9 * s
    # independent route: LAPACK square root
    assert close(r, oracles.matrix_function(b.entries, lambda t: math.sqrt(max(t, 0.0))), 1e-7 * s)
    # a perturbed root is no longer a root, so no other PSD root is nearby
    e = rng.standard_normal((n, n))
    other = r.entries + 1e-3 * (e + e.T)
    assert np.abs(other @ other - b.entries).max() > 1e-9 * s


@given(rng_and_dim())
def test_sqrt_commutes_with_commutant(rd):
    rng, n = rd
    q = random_orthogonal(rng, n)
    b = SymMatrix((q * rng.uniform(0, 3, n)) @ q.T, 1e-9)
    c = SymMatrix((q * rng.standard_normal(n)) @ q.T, 1e-9)  # commutes with b
    assert commutes(sqrt_psd(b), c, 1e-9)


@given(sym_matrices())
def test_decomposition_identities(a):
    absval, pos, neg = abs_pos_neg(a)
    t = 10 * 1e-10 * max(1, order_unit_norm(a))
    assert close(pos - neg, a, t)
    assert close(pos + neg, absval, t)
    assert np.abs(pos.entries @ neg.entries).max() <= t * max(1, order_unit_norm(a))
    assert close(absval, oracles.matrix_function(a.entries, abs), 1e-9 * max(1, order_unit_norm(a)))


@given(sym_matrices(kinds=("clustered", "integer")), rng_and_dim())
def test_carrier_law(a, rd):
    rng, _ = rd
    p = carrier(a)
    s = max(1, order_unit_norm(a))
    assert p.idempotence_defect() <= 1e-12
    assert close(p.entries @ a.entries, a, 1e-9 * s)
    assert commutes(p.matrix, a, 1e-9 * s)
    assert close(p, oracles.range_projection(a.entries, 1e-8), 1e-7)
    # ab = 0 <=> pb = 0
    k = np.eye(a.dim) - p.entries
    x = rng.standard_normal((a.dim, a.dim))
    b_null = k @ (x + x.T) @ k
    assert np.abs(a.entries @ b_null).max() <= 1e-9 * s
    assert np.abs(p.entries @ b_null).max() <= 1e-8 * s
    b_gen = (x + x.T) / 2
    assert (np.abs(a.entries @ b_gen).max() <= 1e-10) == (np.abs(p.entries @ b_gen).max() <= 1e-9)
    # (a^n) and |a| share the carrier
    assert carrier(jordan_product(a, a)).allclose(p, 1e-9)
    assert carrier(abs_pos_neg(a)[0]).allclose(p, 1e-9)


@given(sym_matrices())
def test_resolution_against_lapack_and_reconstruction(a):
    res = spectral_resolution(a)
    s = max(1, order_unit_norm(a))
    assert res.projections[-1].allclose(np.eye(a.dim), 1e-12)
    for p, q in zip(res.projections, res.projections[1:]):
        assert p.rank < q.rank
        assert leq(p.matrix, q.matrix, 1e-9) and commutes(p.matrix, q.matrix, 1e-9)
    for lam in res.breakpoints:
        assert close(res.at(lam), oracles.resolution_at(a.entries, lam), 1e-8)
    assert close(res.reconstruct(), a, a.dim * a.eigensystem().cluster_tol)
    assert res.lower_bound == res.breakpoints[0] and res.upper_bound == res.breakpoints[-1]


@given(sym_matrices())
def test_resolution_commutes_with_commutant(a):
    b = jordan_product(a, a) - 2.0 * a
    for p in spectral_resolution(a).projections:
        assert commutes(p.matrix, b, 1e-8 * max(1, order_unit_norm(a)) ** 2)


@given(sym_matrices())
def test_norm_spectrum_and_invertibility(a):
    spec = spectrum(a)
    assert abs(order_unit_norm(a) - max(abs(x) for x in spec.points)) <= 1e-10
    assert abs(order_unit_norm(a) - oracles.spectral_norm(a.entries)) <= 1e-9 * max(1, order_unit_norm(a))
    for lam in spec.points:
        assert not is_invertible(a - lam * SymMatrix.identity(a.dim))
    off = max(spec.points) + 0.5
    assert is_invertible(a - off * SymMatrix.identity(a.dim))


@given(sym_matrices())
def test_symmetry_law_for_projections(a):
    for p in spectral_resolution(a).projections:
        s = 2.0 * p.matrix - SymMatrix.identity(a.dim)
        assert close(abs_pos_neg(s)[0], np.eye(a.dim), 1e-9)


def test_invert_threshold_boundary():
    a = D([1e-11, 1.0])
    assert invert_threshold(a) == 1e-10
    with pytest.raises(NotInvertibleError):
        invert(a)
    assert is_invertible(D([2e-10, 1.0]))


def test_resolution_projection_is_literal_formula():
    a = SymMatrix([[2, 1], [1, 2]])
    shifted = a - 2.0 * SymMatrix.identity(2)
    expected = np.eye(2) - carrier(pos_part(shifted)).entries
    assert close(resolution_projection(a, 2.0), expected, 1e-14)


@given(sym_matrices())
def test_abs_is_the_positive_root_of_the_square(a):
    absval = abs_pos_neg(a)[0]
    s = max(1, order_unit_norm(a)) ** 2
    assert close(absval.entries @ absval.entries, jordan_product(a, a), 1e-12 * s)
    assert np.linalg.eigvalsh(absval.entries).min() >= -1e-12 * s
