from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semirad import ensembles as en
from semirad import numerics as nx
from semirad import radii as rd
from semirad import semihilbert as sh
from semirad.errors import BadParameter

from conftest import contexts, seeds

K = en.OperandKind


def test_random_psd_examples():
    A = en.random_psd(2, "full", 1)
    assert np.linalg.eigvalsh(A)[0] > 0
    A = en.random_psd(4, 2, 1)
    assert nx.range_basis(A)[1] == 2
    A = en.random_psd(1, 1, 1)
    assert A.shape == (1, 1) and A[0, 0].real > 0


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))), seeds)
def test_random_psd_rank_and_hermitian(nr, seed):
    n, r = nr
    A = en.random_psd(n, r, seed)
    assert np.array_equal(A, A.conj().T)
    assert nx.range_basis(A)[1] == r
    assert np.linalg.eigvalsh(A)[0] >= -1e-12 * np.linalg.norm(A, 2)


def test_random_psd_rejects_bad_rank():
    for bad in (0, 5, "half"):
        with pytest.raises(BadParameter):
            en.random_psd(4, bad, 0)


def test_spec_validation():
    for kwargs in ({"dim": 0}, {"dim": 65}, {"dim": 3, "a_rank": 4}, {"dim": 3, "scale": 0},
                   {"dim": 3, "scale": 1001}):
        with pytest.raises(BadParameter):
            en.EnsembleSpec(**kwargs)
    assert en.EnsembleSpec(5, 2).rank == 2
    assert en.EnsembleSpec(5).rank == 5


def test_identity_context_gives_plain_ginibre():
    ctx = sh.make_context(np.eye(3))
    T = en.random_compatible(ctx, K.GENERIC_A_COMPATIBLE, 12)
    np.testing.assert_allclose(T, en.ginibre(en.rng_for(12, 1), 3), atol=1e-14)


def test_singular_context_generic_is_compatible():
    ctx = sh.make_context(np.diag([1.0, 0.0]))
    T = en.random_compatible(ctx, K.GENERIC_A_COMPATIBLE, 3)
    assert nx.fro((np.eye(2) - ctx.projector) @ T.conj().T @ ctx.A) <= 1e-14
    assert sh.admits_a_adjoint(ctx, T)


def test_reproducibility():
    spec = en.EnsembleSpec(5, 3, K.NILPOTENT, 2.5, 44)
    A1, T1 = en.generate(spec)
    A2, T2 = en.generate(spec)
    assert A1.tobytes() == A2.tobytes() and T1.tobytes() == T2.tobytes()
    _, T3 = en.generate(en.EnsembleSpec(5, 3, K.NILPOTENT, 2.5, 45))
    assert not np.array_equal(T1, T3)


@given(contexts(max_dim=6), st.sampled_from([0.1, 1.0, 10.0]))
def test_kind_structure(drawn, scale):
    ctx, seed = drawn
    tol = 1e-9
    for kind in K:
        T = en.random_compatible(ctx, kind, seed, scale)
        assert sh.admits_a_adjoint(ctx, T), kind
        size = 1 + nx.fro(T)
        if kind is K.A_SELFADJOINT:
            assert nx.fro(ctx.A @ T - T.conj().T @ ctx.A) <= tol * size * (1 + nx.fro(ctx.A))
        elif kind is K.NILPOTENT:
            assert nx.fro(T @ T) <= tol * size ** 2
        elif kind is K.RANK_ONE_A:
            assert nx.fro(T @ T - T) <= tol * size ** 2
        elif kind is K.ZERO:
            assert not np.any(T)


@given(contexts(max_dim=5))
def test_commuting_pairs_commute(drawn):
    ctx, seed = drawn
    B, C = en.random_pair(ctx, K.COMMUTING_PAIR, seed, 1.0)
    assert nx.fro(B @ C - C @ B) <= 1e-9 * (1 + nx.fro(B) * nx.fro(C))
    B, C = en.random_pair(ctx, K.A_SELFADJOINT, seed, 1.0)
    assert sh.is_a_selfadjoint(ctx, B) and sh.is_a_selfadjoint(ctx, C)
    assert not np.array_equal(B, C)


def test_coverage_of_sandwich_regimes():
    ratios = []
    for s in range(1000):
        A, T = en.generate(en.EnsembleSpec(4, "full", K.GENERIC_A_COMPATIBLE, seed=s))
        ctx = sh.make_context(A)
        ratios.append(rd.a_numerical_radius(ctx, T).value / rd.a_op_norm(ctx, T).value)
    ratios = np.array(ratios)
    assert np.any((ratios >= 0.5) & (ratios <= 0.75))
    assert np.any((ratios >= 0.9) & (ratios <= 1.0))


@given(contexts(max_dim=6, min_rank=2))
def test_square_zero_operands_attain_half_norm(drawn):
    ctx, seed = drawn
    T = en.random_compatible(ctx, K.NILPOTENT, seed)
    w = rd.a_numerical_radius(ctx, T).value
    assert w == pytest.approx(rd.a_op_norm(ctx, T).value / 2, rel=1e-8)
