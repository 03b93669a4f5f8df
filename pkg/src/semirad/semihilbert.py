"""Semi-inner-product geometry induced by a positive semidefinite matrix A.

In finite dimension R(A^{1/2}) = R(A), so the operator induced by T on the
range space is realized concretely as the compression

    reduce(T) = U^* A^{1/2} T (A^{1/2})^+ U

with U an orthonormal basis of R(A). Every A-quantity of T is the ordinary
quantity of reduce(T).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .errors import BadParameter, DegenerateVector, DimensionMismatch, NoAAdjoint, NotABounded, ZeroOperator

DEFAULT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AContext:
    A: np.ndarray
    sqrtA: np.ndarray
    sqrtA_pinv: np.ndarray
    A_pinv: np.ndarray
    U: np.ndarray
    rank: int
    rank_tol: float
    residual_tol: float
    projector: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def summary(self) -> dict:
        w = np.linalg.eigvalsh(self.A)
        pos = w[w > self.rank_tol * w[-1]]
        return {
            "dim": self.n,
            "rank": self.rank,
            "lambda_max": float(w[-1]),
            "lambda_min_nonzero": float(pos.min()),
            "condition_on_range": float(w[-1] / pos.min()),
            "rank_tol": self.rank_tol,
            "residual_tol": self.residual_tol,
            "sqrt_residual": nx.fro(self.sqrtA @ self.sqrtA - self.A),
        }


def make_context(A, rank_tol: float | None = None,
                 residual_tol: float = DEFAULT_RESIDUAL_TOL) -> AContext:
    A = nx.as_square(A, "A")
    if rank_tol is None:
        rank_tol = nx.default_rank_tol(A.shape[0])
    if rank_tol < 0 or residual_tol < 0:
        raise BadParameter("tolerances must be non-negative")
    nx.psd_sqrt(A)  # validation: NotHermitian / NotPSD
    A = nx.hermitian_part(A)
    U, r = nx.range_basis(A, rank_tol)
    if r == 0:
        raise ZeroOperator("A must be a non-zero positive operator")
    # one rank decision for every derived artifact
    lam = np.real(np.einsum("ij,ik,kj->j", U.conj(), A, U))
    sqrtA = nx.hermitian_part((U * np.sqrt(lam)) @ nx.dagger(U))
    sqrtA_pinv = nx.hermitian_part((U / np.sqrt(lam)) @ nx.dagger(U))
    A_pinv = nx.hermitian_part((U / lam) @ nx.dagger(U))
    return AContext(A=A, sqrtA=sqrtA, sqrtA_pinv=sqrtA_pinv, A_pinv=A_pinv, U=U, rank=r,
                    rank_tol=float(rank_tol), residual_tol=float(residual_tol),
                    projector=U @ nx.dagger(U))


def _vec(ctx: AContext, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex).ravel()
    if x.shape[0] != ctx.n:
        raise DimensionMismatch(f"vector of length {x.shape[0]} for dimension {ctx.n}")
    return x


def _op(ctx: AContext, T, name: str = "T") -> np.ndarray:
    T = nx.as_square(T, name)
    if T.shape[0] != ctx.n:
        raise DimensionMismatch(f"{name} is {T.shape[0]}x{T.shape[0]}, A is {ctx.n}x{ctx.n}")
    return T


def a_inner(ctx: AContext, x, y) -> complex:
    """<x, y>_A = <Ax, y> = y^* A x."""
    x, y = _vec(ctx, x), _vec(ctx, y)
    return complex(np.vdot(y, ctx.A @ x))


def a_norm(ctx: AContext, x) -> float:
    return float(np.sqrt(max(0.0, a_inner(ctx, x, x).real)))


def admits_a_adjoint(ctx: AContext, T) -> bool:
    """Douglas range test R(T^*A) in R(A), residual based."""
    T = _op(ctx, T)
    TsA = nx.dagger(T) @ ctx.A
    resid = nx.fro(TsA - ctx.projector @ TsA)
    return resid <= ctx.residual_tol * (1 + nx.fro(TsA))


def is_a_bounded(ctx: AContext, T) -> bool:
    """Membership in B_{A^{1/2}}: T maps N(A) into N(A)."""
    T = _op(ctx, T)
    ST = ctx.sqrtA @ T
    resid = nx.fro(ST - ST @ ctx.projector)
    return resid <= ctx.residual_tol * (1 + nx.fro(ST))


def a_adjoint(ctx: AContext, T) -> np.ndarray:
    """The A-adjoint A^+ T^* A, the solution of AX = T^*A with range in R(A)."""
    T = _op(ctx, T)
    if not admits_a_adjoint(ctx, T):
        raise NoAAdjoint("R(T^*A) is not contained in R(A)")
    return ctx.A_pinv @ nx.dagger(T) @ ctx.A


def is_a_selfadjoint(ctx: AContext, T, tol: float | None = None) -> bool:
    T = _op(ctx, T)
    tol = ctx.residual_tol if tol is None else tol
    resid = nx.fro(ctx.A @ T - nx.dagger(T) @ ctx.A)
    return resid <= tol * (1 + nx.fro(ctx.A) * nx.fro(T))


def cartesian(ctx: AContext, T) -> tuple[np.ndarray, np.ndarray]:
    """A-Cartesian decomposition T = Re_A(T) + i Im_A(T)."""
    T = _op(ctx, T)
    S = a_adjoint(ctx, T)
    return (T + S) / 2, (T - S) / 2j


def rank_one_a(ctx: AContext, x) -> np.ndarray:
    """Matrix of z -> <z, x>_A x, i.e. x (Ax)^*."""
    x = _vec(ctx, x)
    if a_norm(ctx, x) <= ctx.rank_tol:
        raise DegenerateVector("x has vanishing A-seminorm")
    return np.outer(x, (ctx.A @ x).conj())


def reduce(ctx: AContext, T) -> np.ndarray:
    """Compression of an A-bounded T to an r x r matrix on R(A)."""
    T = _op(ctx, T)
    if not (admits_a_adjoint(ctx, T) or is_a_bounded(ctx, T)):
        raise NotABounded("T is neither in B_A nor in B_{A^1/2}")
    U = ctx.U
    return nx.dagger(U) @ ctx.sqrtA @ T @ ctx.sqrtA_pinv @ U
