"""Rank-one maintenance of lower Cholesky factors.

The path engines keep L with C = L L^T for the active curvature / Gram matrix
and patch it as columns enter or leave and as rank-one terms change. A fresh
factorization is forced periodically by the callers to stop drift.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import SingularGramError


def chol_factor(C: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(C)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(str(exc)) from exc


def chol_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    return cho_solve((L, True), b)


def chol_append(L: np.ndarray, cross: np.ndarray, diag: float, pivot_tol: float = 0.0):
    """Factor of C extended by one trailing row/column (cross, diag).

    Raises SingularGramError when the new pivot falls at or below pivot_tol
    (relative collinearity guard is the caller's job).
    """
    m = L.shape[0]
    out = np.zeros((m + 1, m + 1))
    out[:m, :m] = L
    if m:
        w = solve_triangular(L, cross, lower=True, check_finite=False)
        out[m, :m] = w
        d2 = diag - w @ w
    else:
        d2 = diag
    if d2 <= pivot_tol:
        raise SingularGramError(f"append pivot {d2!r} not positive")
    out[m, m] = np.sqrt(d2)
    return out


def chol_delete(L: np.ndarray, k: int) -> np.ndarray:
    """Factor of C with row/column k removed (Givens re-triangularization)."""
    n = L.shape[0]
    M = np.delete(L, k, axis=0).copy()
    for j in range(k, n - 1):
        a, b = M[j, j], M[j, j + 1]
        r = np.hypot(a, b)
        if r == 0.0:
            continue
        c, s = a / r, b / r
        cj = M[j:, j] * c + M[j:, j + 1] * s
        M[j:, j + 1] = -M[j:, j] * s + M[j:, j + 1] * c
        M[j:, j] = cj
        M[j, j] = r
        M[j, j + 1] = 0.0
    return M[:, : n - 1]


def chol_update(L: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Factor of C + v v^T."""
    L = L.copy()
    v = np.asarray(v, dtype=float).copy()
    n = L.shape[0]
    for j in range(n):
        r = np.hypot(L[j, j], v[j])
        c, s = r / L[j, j], v[j] / L[j, j]
        L[j, j] = r
        if j + 1 < n:
            L[j + 1 :, j] = (L[j + 1 :, j] + s * v[j + 1 :]) / c
            v[j + 1 :] = c * v[j + 1 :] - s * L[j + 1 :, j]
    return L


def chol_downdate(L: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Factor of C - v v^T; raises SingularGramError if the result is not PD."""
    L = L.copy()
    v = np.asarray(v, dtype=float).copy()
    n = L.shape[0]
    for j in range(n):
        d2 = (L[j, j] - v[j]) * (L[j, j] + v[j])
        if d2 <= 0.0:
            raise SingularGramError("downdate leaves the matrix indefinite")
        r = np.sqrt(d2)
        c, s = r / L[j, j], v[j] / L[j, j]
        L[j, j] = r
        if j + 1 < n:
            L[j + 1 :, j] = (L[j + 1 :, j] - s * v[j + 1 :]) / c
            v[j + 1 :] = c * v[j + 1 :] - s * L[j + 1 :, j]
    return L
