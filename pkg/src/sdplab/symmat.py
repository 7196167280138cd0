"""Dense symmetric-matrix kernels.

Symmetric matrices are plain ``numpy`` 2-D float arrays.  Every constructor in
this package passes them through :func:`sym`, which makes them bit-exactly
symmetric.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import DimensionError, NotPositiveDefiniteError, NumericalError

# Relative floor for calling a matrix positive definite.
PD_RTOL = 1e-12


def sym(M) -> np.ndarray:
    """Return the symmetric part of ``M`` as a float array (bit-exactly symmetric)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return 0.5 * (M + M.T)


def _check_pair(U: np.ndarray, V: np.ndarray) -> None:
    if U.shape != V.shape:
        raise DimensionError(f"dimension mismatch: {U.shape} vs {V.shape}")


def inner(U, V) -> float:
    """Trace inner product ``sum_ij U_ij V_ij``."""
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    _check_pair(U, V)
    return float(np.einsum("ij,ij->", U, V))


def eigh(M: np.ndarray):
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc


def min_eig(M) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    M = sym(M)
    try:
        w = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    return float(w[0])


def max_eig(M) -> float:
    M = sym(M)
    try:
        w = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    return float(w[-1])


def pd_floor(M) -> float:
    """Scale-aware threshold below which ``min_eig`` does not count as positive."""
    return PD_RTOL * max(1.0, float(np.linalg.norm(M, 2)))


def is_pd(M) -> bool:
    M = sym(M)
    return min_eig(M) > pd_floor(M)


def inv_sqrt(X) -> np.ndarray:
    """Symmetric positive definite ``W`` with ``W @ W @ X == I``."""
    X = sym(X)
    w, Q = eigh(X)
    if w[0] <= pd_floor(X):
        raise NotPositiveDefiniteError(f"matrix not positive definite (min eig {w[0]:.3e})")
    return sym((Q / np.sqrt(w)) @ Q.T)


def sqrtm_pd(X) -> np.ndarray:
    """Symmetric positive definite square root."""
    X = sym(X)
    w, Q = eigh(X)
    if w[0] <= pd_floor(X):
        raise NotPositiveDefiniteError(f"matrix not positive definite (min eig {w[0]:.3e})")
    return sym((Q * np.sqrt(w)) @ Q.T)


def chol_or_none(X) -> Optional[np.ndarray]:
    """Lower Cholesky factor of ``X`` or ``None`` when ``X`` is not positive definite."""
    X = sym(X)
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(L)) or np.min(np.diag(L)) <= 0.0:
        return None
    return L
