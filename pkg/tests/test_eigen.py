import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from synaptic import eigen
from synaptic.eigen import CLUSTER_REL, cluster_tolerance, eigensystem, jacobi_eigh

from strategies import rng_and_dim

BACKENDS = ["python"] + (["cython"] if eigen.BACKEND == "cython" else [])


def _sym(rng, n):
    x = rng.standard_normal((n, n))
    return (x + x.T) / 2


@pytest.mark.parametrize("backend", BACKENDS)
@given(rd=rng_and_dim(max_dim=8))
def test_matches_lapack(backend, rd):
    rng, n = rd
    a = _sym(rng, n)
    w, v, _ = jacobi_eigh(a, backend=backend)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-12 * max(1, np.abs(a).max()))
    assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-13
    assert np.max(np.abs((v * w) @ v.T - a)) <= 1e-12 * max(1.0, np.linalg.norm(a))


@given(rd=rng_and_dim(max_dim=8))
def test_backends_agree(rd):
    if eigen.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    rng, n = rd
    a = _sym(rng, n)
    wp, vp, sp = jacobi_eigh(a, backend="python")
    wc, vc, sc = jacobi_eigh(a, backend="cython")
    assert sp == sc
    assert np.allclose(wp, wc, atol=1e-13, rtol=0)
    assert np.allclose(np.abs(vp.T @ vc), np.eye(n), atol=1e-10) or len(set(np.round(wp, 8))) < n


@pytest.mark.parametrize("backend", BACKENDS)
def test_repeated_eigenvalues_and_dim_one(backend):
    w, v, _ = jacobi_eigh(np.diag([2.0, 2.0, -1.0]), backend=backend)
    assert list(w) == [-1.0, 2.0, 2.0]
    w, v, _ = jacobi_eigh(np.array([[5.0]]), backend=backend)
    assert w[0] == 5.0 and v[0, 0] == 1.0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.eye(2), backend="fortran")


def test_clusters_merge_within_tolerance():
    es = eigensystem(np.diag([1.0, 1.0 + 1e-12, 3.0]))
    groups = es.clusters()
    assert [g[1].shape[1] for g in groups] == [2, 1]
    assert es.cluster_tol == CLUSTER_REL * 3.0
    assert cluster_tolerance(0.1) == CLUSTER_REL


def test_cluster_values_are_means():
    es = eigensystem(np.diag([2.0, 2.0 + 2e-9]))
    (val, cols), = es.clusters()
    assert val == pytest.approx(2.0 + 1e-9, abs=1e-15)


def test_pure_python_switch_selects_fallback():
    env = dict(os.environ, SYNAPTIC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from synaptic import eigen; print(eigen.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
