from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semirad import numerics as nx
from semirad.errors import DimensionMismatch, NonFinite, NotHermitian, NotPSD, SchemaMismatch

from conftest import cgauss, seeds


def _hermitian(seed, n):
    G = cgauss(np.random.default_rng(seed), n, n)
    return (G + G.conj().T) / 2


# -- hermitian_eig -------------------------------------------------------------

@pytest.mark.parametrize("M, expected", [
    (np.diag([3.0, -1.0]), [-1.0, 3.0]),
    (np.array([[0, 1], [1, 0]]), [-1.0, 1.0]),
    (np.zeros((3, 3)), [0.0, 0.0, 0.0]),
])
def test_hermitian_eig_examples(M, expected):
    np.testing.assert_allclose(nx.hermitian_eig(M).eigenvalues, expected, atol=1e-14)


def test_hermitian_eig_rejects_bad_input():
    with pytest.raises(NotHermitian):
        nx.hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonFinite):
        nx.hermitian_eig(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(DimensionMismatch):
        nx.hermitian_eig(np.ones((2, 3)))


@given(seeds, st.integers(1, 8))
def test_hermitian_eig_reconstructs(seed, n):
    M = _hermitian(seed, n)
    e = nx.hermitian_eig(M)
    V, lam = e.eigenvectors, e.eigenvalues
    assert np.all(np.diff(lam) >= 0)
    assert nx.fro(M @ V - V * lam) <= 1e-10 * (1 + nx.fro(M))
    assert nx.fro(V.conj().T @ V - np.eye(n)) <= 1e-10


@given(seeds, st.integers(1, 5))
def test_sampled_rayleigh_quotients_never_exceed_top_eigenvalue(seed, n):
    M = _hermitian(seed, n)
    X = cgauss(np.random.default_rng(seed + 1), 10_000, n)
    X /= np.linalg.norm(X, axis=1)[:, None]
    rq = np.real(np.einsum("ri,ij,rj->r", X.conj(), M, X))
    assert rq.max() <= nx.hermitian_eig(M).eigenvalues[-1] + 1e-6


# -- pinv ------------------------------------------------------------------------

@pytest.mark.parametrize("M, expected", [
    (np.eye(2), np.eye(2)),
    (np.diag([2.0, 0.0]), np.diag([0.5, 0.0])),
    (np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])),
])
def test_pinv_examples(M, expected):
    np.testing.assert_allclose(nx.pinv(M), expected, atol=1e-14)


def _penrose_residuals(M, P):
    return (nx.fro(M @ P @ M - M), nx.fro(P @ M @ P - P),
            nx.fro((M @ P).conj().T - M @ P), nx.fro((P @ M).conj().T - P @ M))


@given(seeds, st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_pinv_penrose_conditions(seed, m, n, k):
    rng = np.random.default_rng(seed)
    M = cgauss(rng, m, k) @ cgauss(rng, k, n)  # rank <= k
    P = nx.pinv(M)
    assert max(_penrose_residuals(M, P)) <= 1e-9 * (1 + nx.fro(M))


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_double_pinv_recovers_matrix_on_row_space(seed, n, k):
    rng = np.random.default_rng(seed)
    M = cgauss(rng, n, min(k, n)) @ cgauss(rng, min(k, n), n)
    assert nx.fro(nx.pinv(nx.pinv(M)) - M) <= 1e-8 * (1 + nx.fro(M))


def test_pinv_rejects_nonfinite():
    with pytest.raises(NonFinite):
        nx.pinv(np.array([[np.inf]]))


def test_pinv_of_zero_is_zero():
    np.testing.assert_array_equal(nx.pinv(np.zeros((2, 3))), np.zeros((3, 2)))


# -- psd_sqrt ------------------------------------------------------------------------

def test_psd_sqrt_examples():
    np.testing.assert_allclose(nx.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    np.testing.assert_allclose(nx.psd_sqrt(np.eye(3)), np.eye(3), atol=1e-14)
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    S = nx.psd_sqrt(A)
    assert nx.fro(S @ S - A) <= 1e-12


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSD):
        nx.psd_sqrt(np.diag([1.0, -1e-3]))
    with pytest.raises(NotPSD):
        nx.psd_sqrt(-np.eye(2))


def test_psd_sqrt_clamps_roundoff_negatives():
    S = nx.psd_sqrt(np.diag([1.0, -1e-14]))
    np.testing.assert_allclose(S, np.diag([1.0, 0.0]), atol=1e-15)


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_psd_sqrt_squares_and_commutes(seed, n, k):
    G = cgauss(np.random.default_rng(seed), min(k, n), n)
    A = G.conj().T @ G
    S = nx.psd_sqrt(A)
    assert nx.fro(S - S.conj().T) == 0
    assert np.linalg.eigvalsh(S)[0] >= -1e-12 * max(1.0, nx.fro(S))
    assert nx.fro(S @ S - A) <= 1e-9 * (1 + nx.fro(A))
    assert nx.fro(S @ A - A @ S) <= 1e-9 * max(nx.fro(A) ** 2, 1e-300)


# -- range_basis -------------------------------------------------------------------

def test_range_basis_examples():
    U, r = nx.range_basis(np.diag([1.0, 0.0]))
    assert r == 1
    np.testing.assert_allclose(U, [[1.0], [0.0]], atol=1e-15)
    U, r = nx.range_basis(np.eye(3))
    assert r == 3
    np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-14)


def test_range_basis_of_rank_two_product():
    G = cgauss(np.random.default_rng(4), 2, 4)
    A = G.conj().T @ G
    U, r = nx.range_basis(A)
    assert r == 2
    assert nx.fro((np.eye(4) - U @ U.conj().T) @ A) <= 1e-9


def test_range_basis_phase_convention():
    U, _ = nx.range_basis(np.array([[1, 1j], [-1j, 1]]))
    k = np.argmax(np.abs(U[:, 0]) > 1e-8)
    assert U[k, 0].imag == 0 and U[k, 0].real > 0


def test_range_basis_rejects_non_psd():
    with pytest.raises(NotPSD):
        nx.range_basis(np.diag([1.0, -0.5]))


# -- matrix file format ---------------------------------------------------------------

def test_matrix_document_round_trip(tmp_path):
    M = np.array([[1 + 2j, -0.1], [1e-300, 3.25j]])
    path = tmp_path / "m.json"
    nx.save_matrix(path, M)
    doc = json.loads(path.read_text())
    assert set(doc) == {"rows", "cols", "data"}
    assert doc["data"][0] == [1.0, 2.0]
    np.testing.assert_array_equal(nx.load_matrix(path), M)


@pytest.mark.parametrize("doc", [
    {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
    {"rows": 1, "cols": 1, "data": [[1, 0]], "extra": 1},
    {"rows": 1, "cols": 1, "data": [[1]]},
    {"rows": 0, "cols": 1, "data": []},
    [[1, 0]],
])
def test_matrix_document_rejects_malformed(doc):
    with pytest.raises(SchemaMismatch):
        nx.matrix_from_dict(doc)


def test_load_matrix_rejects_non_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SchemaMismatch, match="bad.json"):
        nx.load_matrix(path)


def test_unit_phase_makes_first_entry_positive():
    x = nx.unit_phase(np.array([0.0, 1j, 1.0]))
    np.testing.assert_allclose(x, [0.0, 1.0, -1j])
