"""Symmetric-definite generalized eigensolver.

Solves A x = lambda B x for symmetric A and symmetric positive definite B
by explicit Cholesky reduction to a standard symmetric problem.  The
factorization is done in-house so that a failed pivot is reported with its
index and value; the reduced dense symmetric solve is delegated to LAPACK.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    DefinitenessError,
    DomainError,
    PreconditionError,
    Spectrum,
    SymmetricMatrix,
)


def cholesky_lower(B: np.ndarray, rel_pivot_tol: float = 1e-12) -> np.ndarray:
    """Lower Cholesky factor of a symmetric matrix, with pivot diagnostics.

    Raises DefinitenessError carrying the failing pivot index and value when
    a pivot drops below rel_pivot_tol times the largest initial diagonal.
    """
    n = B.shape[0]
    L = np.array(B, dtype=float, copy=True)
    max_diag = float(np.max(np.abs(np.diag(L)))) if n else 0.0
    if max_diag == 0.0:
        raise DefinitenessError(pivot_index=0, pivot_value=0.0)
    threshold = rel_pivot_tol * max_diag
    for k in range(n):
        pivot = L[k, k]
        if pivot <= threshold:
            raise DefinitenessError(pivot_index=k, pivot_value=float(pivot))
        root = np.sqrt(pivot)
        L[k, k] = root
        L[k + 1 :, k] /= root
        L[k + 1 :, k + 1 :] -= np.outer(L[k + 1 :, k], L[k + 1 :, k])
    return np.tril(L)


def rayleigh(A: SymmetricMatrix, B: SymmetricMatrix, x: np.ndarray) -> float:
    """Rayleigh quotient (x' A x) / (x' B x)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (A.order,) or A.order != B.order:
        raise PreconditionError("vector and matrix orders do not match")
    denom = float(x @ (B.entries @ x))
    if denom <= 0.0:
        raise PreconditionError(f"x' B x must be positive, got {denom:.6e}")
    return float(x @ (A.entries @ x)) / denom


@dataclass(frozen=True)
class GenEigProblem:
    """A x = lambda B x with symmetric A and symmetric positive definite B."""

    A: SymmetricMatrix
    B: SymmetricMatrix

    def __post_init__(self):
        if self.A.order != self.B.order:
            raise DomainError(
                f"order mismatch: A is {self.A.order}, B is {self.B.order}"
            )

    def solve(self, k: int | None = None) -> Spectrum:
        """First k eigenpairs in ascending order, eigenvectors B-orthonormal.

        Reduces via B = L L' to the symmetric problem for L^{-1} A L^{-T},
        solves it densely, and back-substitutes x = L^{-T} y.
        """
        n = self.A.order
        if k is None:
            k = n
        if not (1 <= k <= n):
            raise PreconditionError(f"k must lie in [1, {n}], got {k}")
        L = cholesky_lower(self.B.entries)
        # C = L^{-1} A L^{-T}, symmetrized against roundoff
        tmp = scipy.linalg.solve_triangular(L, self.A.entries, lower=True)
        C = scipy.linalg.solve_triangular(L, tmp.T, lower=True)
        C = 0.5 * (C + C.T)
        vals, Y = scipy.linalg.eigh(C)
        X = scipy.linalg.solve_triangular(L.T, Y, lower=False)
        return Spectrum(
            eigenvalues=vals[:k].copy(),
            eigenvectors=X[:, :k].copy(),
            b_label=self.B.label,
        )
