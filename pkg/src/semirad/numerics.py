"""Dense complex linear-algebra primitives.

Everything here is deterministic: same input bytes, same output bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotHermitian, NotPSD, SchemaMismatch

EPS = np.finfo(float).eps
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    if M.ndim != 2 or M.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name} has NaN/Inf entries")
    return M


def as_square(M, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + dagger(M)) / 2


def skew_part(M: np.ndarray) -> np.ndarray:
    """Hermitian matrix K with M = hermitian_part(M) + iK."""
    return (M - dagger(M)) / 2j


def fro(M: np.ndarray) -> float:
    return float(np.linalg.norm(M))


def _symmetrized(M, name: str) -> np.ndarray:
    M = as_square(M, name)
    if fro(M - dagger(M)) > HERMITIAN_TOL * (1 + fro(M)):
        raise NotHermitian(f"{name} is not Hermitian")
    return hermitian_part(M)


@dataclass(frozen=True)
class HermitianEig:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(M) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    H = _symmetrized(M, "M")
    w, V = np.linalg.eigh(H)
    return HermitianEig(w, V)


def default_rank_tol(n: int) -> float:
    return n * EPS


def pinv(M, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse; singular values <= rank_tol*sigma_max are dropped."""
    M = as_matrix(M, "M")
    if rank_tol is None:
        rank_tol = default_rank_tol(max(M.shape))
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=complex)
    keep = s > rank_tol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (dagger(Vh) * inv) @ dagger(U)


def _psd_eig(A, name: str = "A"):
    H = _symmetrized(A, name)
    w, V = np.linalg.eigh(H)
    top = max(w[-1], 0.0)
    if w[0] < -PSD_TOL * top or (top == 0 and w[0] < 0):
        raise NotPSD(f"{name} has eigenvalue {w[0]:.3e} < 0 (lambda_max {top:.3e})")
    return np.clip(w, 0.0, None), V


def psd_sqrt(A) -> np.ndarray:
    """Hermitian PSD square root; round-off negative eigenvalues are clamped to 0."""
    w, V = _psd_eig(A)
    S = (V * np.sqrt(w)) @ dagger(V)
    return hermitian_part(S)


def _fix_phase(V: np.ndarray) -> np.ndarray:
    """Make the first non-negligible entry of every column real positive."""
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        k = int(np.argmax(np.abs(col) > 1e-8 * np.abs(col).max()))
        ph = col[k] / abs(col[k])
        V[:, j] = col / ph
    return V


def range_basis(A, rank_tol: float | None = None) -> tuple[np.ndarray, int]:
    """Orthonormal basis of R(A) for PSD A, and its dimension."""
    w, V = _psd_eig(A)
    if rank_tol is None:
        rank_tol = default_rank_tol(len(w))
    top = w[-1]
    keep = w > rank_tol * top if top > 0 else np.zeros(len(w), dtype=bool)
    # descending eigenvalue order
    U = _fix_phase(V[:, keep][:, ::-1])
    return U, int(keep.sum())


def unit_phase(x: np.ndarray) -> np.ndarray:
    """Normalize a vector's global phase: first non-negligible entry real positive."""
    return _fix_phase(x.reshape(-1, 1)).ravel()


# -- matrix file format -------------------------------------------------------

def matrix_to_dict(M) -> dict:
    M = as_matrix(M)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def matrix_from_dict(doc) -> np.ndarray:
    if not isinstance(doc, dict) or set(doc) != {"rows", "cols", "data"}:
        raise SchemaMismatch("matrix document must have exactly the fields rows, cols, data")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise SchemaMismatch("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise SchemaMismatch(f"data has {len(data) if isinstance(data, list) else '?'} entries, expected {rows * cols}")
    try:
        vals = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError) as exc:
        raise SchemaMismatch(f"data entries must be [re, im] pairs: {exc}") from None
    return as_matrix(np.array(vals, dtype=complex).reshape(rows, cols))


def load_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: not a valid matrix document ({exc})") from None
    try:
        return matrix_from_dict(doc)
    except SchemaMismatch as exc:
        raise SchemaMismatch(f"{path}: {exc}") from None


def save_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(M), indent=1) + "\n")
