"""Seeded generators for PSD weights and A-compatible operands.

All randomness comes from numpy's PCG64 bit generator seeded through a
SeedSequence built from an integer path (seed, trial, slot, ...), so each
operand has its own stream and reruns are bit-identical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from . import semihilbert as sh
from .errors import BadParameter

RNG_ALGORITHM = "numpy PCG64 seeded by SeedSequence(entropy=path)"


class OperandKind(str, enum.Enum):
    GENERIC_A_COMPATIBLE = "generic"
    A_SELFADJOINT = "selfadjoint"
    RANK_ONE_A = "rank_one"
    NILPOTENT = "nilpotent"
    COMMUTING_PAIR = "commuting"
    ZERO = "zero"


@dataclass(frozen=True)
class EnsembleSpec:
    dim: int
    a_rank: int | str = "full"
    operand_kind: OperandKind = OperandKind.GENERIC_A_COMPATIBLE
    scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.dim <= 64:
            raise BadParameter(f"dim must lie in [1, 64], got {self.dim}")
        if self.a_rank != "full" and not (isinstance(self.a_rank, int) and 1 <= self.a_rank <= self.dim):
            raise BadParameter(f"a_rank must be 'full' or an integer in [1, {self.dim}]")
        if not 0 < self.scale <= 1e3:
            raise BadParameter("scale must lie in (0, 1000]")

    @property
    def rank(self) -> int:
        return self.dim if self.a_rank == "full" else int(self.a_rank)


def rng_for(*path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(p) for p in path])))


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_psd(dim: int, a_rank: int | str, seed: int) -> np.ndarray:
    """A = G^*G with G an a_rank x dim complex Gaussian matrix."""
    r = dim if a_rank == "full" else a_rank
    if not (isinstance(r, (int, np.integer)) and 1 <= r <= dim):
        raise BadParameter(f"need 1 <= a_rank <= dim, got a_rank={a_rank}, dim={dim}")
    for attempt in range(16):
        G = ginibre(rng_for(seed, 0, attempt), int(r), dim)
        A = nx.hermitian_part(nx.dagger(G) @ G)
        if nx.range_basis(A)[1] == r:
            return A
    raise BadParameter(f"could not draw a rank-{r} PSD matrix")  # probability zero


def _conjugate(ctx: sh.AContext, S: np.ndarray) -> np.ndarray:
    return ctx.sqrtA_pinv @ S @ ctx.sqrtA


def random_a_unit(ctx: sh.AContext, rng: np.random.Generator) -> np.ndarray:
    x = ctx.sqrtA_pinv @ (rng.standard_normal(ctx.n) + 1j * rng.standard_normal(ctx.n))
    return x / sh.a_norm(ctx, x)


def random_compatible(ctx: sh.AContext, kind: OperandKind, seed: int, scale: float = 1.0) -> np.ndarray:
    """One operand admitting an A-adjoint, with the structure named by ``kind``."""
    kind = OperandKind(kind)
    rng = rng_for(seed, 1)
    n, r = ctx.n, ctx.rank
    if kind is OperandKind.ZERO:
        return np.zeros((n, n), dtype=complex)
    if kind is OperandKind.RANK_ONE_A:
        # an A-projection; scale would break idempotence
        return sh.rank_one_a(ctx, random_a_unit(ctx, rng))
    if kind is OperandKind.NILPOTENT:
        # strictly upper triangular with square zero: [[0, G], [0, 0]]
        k = r // 2
        N = np.zeros((r, r), dtype=complex)
        N[:k, k:] = ginibre(rng, k, r - k)
        return scale * _conjugate(ctx, ctx.U @ N @ nx.dagger(ctx.U))
    T = _conjugate(ctx, ginibre(rng, n))
    if kind is OperandKind.A_SELFADJOINT:
        T = sh.cartesian(ctx, T)[0]
    elif kind is OperandKind.COMMUTING_PAIR:
        pass  # first member is generic; see random_pair
    return scale * T


def random_pair(ctx: sh.AContext, kind: OperandKind, seed: int, scale: float = 1.0):
    """(B, C) where the pair as a whole carries the structure of ``kind``."""
    kind = OperandKind(kind)
    B = random_compatible(ctx, kind, seed, scale)
    if kind is OperandKind.COMMUTING_PAIR:
        a, b = ginibre(rng_for(seed, 2), 1, 2)[0]
        return B, a * (B @ B) / max(scale, 1.0) + b * B
    if kind is OperandKind.RANK_ONE_A:
        return B, random_compatible(ctx, kind, seed + 1)
    C = random_compatible(ctx, kind, seed + 1_000_003, scale)
    return B, C


def generate(spec: EnsembleSpec) -> tuple[np.ndarray, np.ndarray]:
    """(A, T) for a single EnsembleSpec."""
    A = random_psd(spec.dim, spec.a_rank, spec.seed)
    ctx = sh.make_context(A)
    return A, random_compatible(ctx, spec.operand_kind, spec.seed, spec.scale)
