import math

import numpy as np
import pytest
from hypothesis import given

from synaptic.errors import DiagnosticError, InputError
from synaptic.generators import commuting_projections, comparable_projections, generic_projection
from synaptic.matrix_model import Projection, SymMatrix, leq
from synaptic.projection_lattice import (
    commuting,
    complement,
    is_boolean_family,
    join,
    mackey_compatible,
    meet,
    orthogonal,
    proj_leq,
    span_projection,
)

import oracles
from strategies import rng_and_dim

P = lambda *d: Projection(np.diag(d))  # noqa: E731
E1 = span_projection([1, 0])
E11 = span_projection([1, 1])
E1m1 = span_projection([1, -1])


def close(p, q, atol=1e-12):
    q = q.entries if hasattr(q, "entries") else np.asarray(q, dtype=float)
    return np.max(np.abs(p.entries - q)) <= atol


def test_complement_examples():
    assert close(complement(P(1, 0)), np.diag([0, 1]))
    assert close(complement(Projection.zero(2)), np.eye(2))
    assert close(complement(E11), [[0.5, -0.5], [-0.5, 0.5]], 1e-15)


def test_meet_examples():
    assert meet(P(1, 0), P(0, 1)).rank == 0
    assert close(meet(E11, E11), E11, 1e-12)
    # independent route: null space of [I-p; I-q] is trivial
    assert oracles.intersection_projection(E1.entries, E11.entries).shape == (2, 2)
    assert np.allclose(oracles.intersection_projection(E1.entries, E11.entries), 0)
    assert meet(E1, E11).rank == 0


def test_join_examples():
    assert close(join(P(1, 0), P(0, 1)), np.eye(2))
    assert close(join(E11, Projection.zero(2)), E11, 1e-12)
    assert close(join(E1, E11), np.eye(2), 1e-12)


def test_orthogonal_examples():
    assert orthogonal(P(1, 0), P(0, 1))
    assert not orthogonal(E11, E11)
    assert orthogonal(E11, E1m1)


def test_mackey_examples():
    assert mackey_compatible(P(1, 0, 1), P(1, 1, 0))
    assert not mackey_compatible(E1, E11)
    assert mackey_compatible(E11, complement(E11))


def test_boolean_family_examples():
    diag3 = [P(*bits) for bits in np.ndindex(2, 2, 2)]
    assert is_boolean_family(diag3)
    assert not is_boolean_family([E1, E11])
    assert is_boolean_family([E11])
    with pytest.raises(InputError):
        is_boolean_family([])


def test_dimension_mismatch():
    with pytest.raises(InputError):
        meet(P(1, 0), P(1, 0, 0))


def test_orthogonal_sum_join_is_exact_sum():
    p, q = E11, E1m1
    assert np.array_equal(join(p, q).entries, p.entries + q.entries)


def test_disagreeing_criteria_raise_diagnostic():
    # corrupted input: pq = 0 but p + q is not below 1
    bad = Projection._trusted(np.array([[1.5, 0.0], [0.0, 0.0]]), 1)
    with pytest.raises(DiagnosticError):
        orthogonal(bad, Projection._trusted(np.diag([0.0, 1.0]), 1))


def test_mackey_disagreement_raises():
    # symmetric, commutes with diag(1,0), but not idempotent: the lattice test fails while commutation holds
    bad = Projection._trusted(np.diag([0.5, 0.0]), 1)
    with pytest.raises(DiagnosticError):
        mackey_compatible(bad, P(1, 0))


def test_extreme_point_property():
    for p in (E1, E11, P(1, 0, 1)):
        assert meet(p, complement(p)).rank == 0


# --------------------------------------------------------------- properties


@given(rng_and_dim())
def test_pCq_laws_on_commuting_pairs(rd):
    rng, n = rd
    p, q = commuting_projections(rng, n)
    pq = p.entries @ q.entries
    assert np.abs(pq @ pq - pq).max() <= 1e-9 and np.abs(pq - pq.T).max() <= 1e-9
    pq_m = SymMatrix(pq, 1e-9)
    assert leq(pq_m, p.matrix, 1e-9) and leq(pq_m, q.matrix, 1e-9)
    assert proj_leq(p, q, 1e-9) == (np.abs(p.entries - pq).max() <= 1e-9)
    assert close(meet(p, q), pq, 1e-9)
    assert mackey_compatible(p, q) and commuting(p, q)


@given(rng_and_dim())
def test_orthomodular_law(rd):
    rng, n = rd
    p, q = comparable_projections(rng, n)
    assert proj_leq(p, q, 1e-9)
    assert close(join(p, meet(q, complement(p))), q, 1e-8)


@given(rng_and_dim())
def test_meet_and_join_against_subspace_oracles(rd):
    rng, n = rd
    p, q = generic_projection(rng, n), generic_projection(rng, n)
    assert close(meet(p, q), oracles.intersection_projection(p.entries, q.entries), 1e-8)
    assert close(join(p, q), oracles.sum_projection(p.entries, q.entries), 1e-8)


@given(rng_and_dim())
def test_de_morgan_and_involution(rd):
    rng, n = rd
    p, q = generic_projection(rng, n), generic_projection(rng, n)
    assert close(complement(join(p, q)), meet(complement(p), complement(q)), 1e-8)
    assert close(complement(complement(p)), p, 1e-15)


@given(rng_and_dim())
def test_meet_is_greatest_lower_bound(rd):
    rng, n = rd
    p, q = commuting_projections(rng, n)
    m = meet(p, q)
    assert proj_leq(m, p, 1e-9) and proj_leq(m, q, 1e-9)
    # any r below both (built from the common range) is below the meet
    if m.rank:
        r = span_projection(m.basis[:, : max(1, m.rank // 2)])
        assert proj_leq(r, p, 1e-9) and proj_leq(r, q, 1e-9) and proj_leq(r, m, 1e-9)


@given(rng_and_dim())
def test_compatibility_matches_commutation_on_generic_pairs(rd):
    rng, n = rd
    p, q = generic_projection(rng, n), generic_projection(rng, n)
    assert mackey_compatible(p, q) == commuting(p, q, 1e-9)
