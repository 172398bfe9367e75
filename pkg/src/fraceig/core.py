"""Shared domain types and special-function primitives.

Everything downstream (bound formulas, Galerkin assembly, eigensolves)
builds on the types and scalar functions defined here.  All types are
immutable after construction; all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the function."""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its stated preconditions."""


class NumericError(RuntimeError):
    """A numerical procedure failed to meet its accuracy contract."""


class DefinitenessError(NumericError):
    """A matrix expected to be positive definite is not.

    Carries the index of the offending Cholesky pivot, which for the
    right-hand form of the eigenproblem signals mu <= -lambda_hat(s2, 1).
    """

    def __init__(self, pivot_index: int, pivot_value: float):
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value
        super().__init__(
            f"matrix not positive definite: pivot {pivot_index} = {pivot_value:.6e}"
        )


# Lanczos approximation, g = 7, 9 coefficients (Godfrey).  Relative error
# well below 1e-13 on the positive real axis.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function on the positive real axis.

    Lanczos approximation with reflection for x < 1/2.  Relative error
    <= 1e-12 on (0, 60].
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma requires a finite positive argument, got {x}")
    if x < 0.5:
        # reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x))
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, coef in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += coef / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def sphere_area(N: int) -> float:
    """Surface area of the unit sphere in R^N: 2 pi^{N/2} / Gamma(N/2).

    N = 1 gives 2 (the two-point sphere), the convention used by every
    one-dimensional kernel integral in this package.
    """
    if not isinstance(N, (int, np.integer)) or N <= 0:
        raise DomainError(f"sphere_area requires a positive integer dimension, got {N}")
    return 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)


def unit_ball_volume(N: int) -> float:
    """Volume of the unit ball in R^N: sphere_area(N) / N."""
    if not isinstance(N, (int, np.integer)) or N <= 0:
        raise DomainError(
            f"unit_ball_volume requires a positive integer dimension, got {N}"
        )
    return sphere_area(N) / N


def frac_norm_const(N: int, s: float) -> float:
    """Normalization constant of the fractional Laplacian of order s in R^N.

    c(N, s) = 2^{2s} pi^{-N/2} s Gamma((N + 2s)/2) / Gamma(1 - s).
    """
    if not isinstance(N, (int, np.integer)) or N <= 0:
        raise DomainError(f"dimension must be a positive integer, got {N}")
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    return (
        2.0 ** (2.0 * s)
        * math.pi ** (-N / 2.0)
        * s
        * gamma((N + 2.0 * s) / 2.0)
        / gamma(1.0 - s)
    )


@dataclass(frozen=True)
class ProblemParams:
    """Scalar parameters of the mixed-order eigenproblem.

    N is the ambient dimension, s1 > s2 the two fractional orders, mu the
    zeroth-order shift on the right-hand side.
    """

    N: int
    s1: float
    s2: float
    mu: float = 0.0

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N <= 0:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not (math.isfinite(self.s1) and math.isfinite(self.s2)):
            raise DomainError("s1 and s2 must be finite")
        if not (0.0 < self.s2 < self.s1 < 1.0):
            raise DomainError(
                f"orders must satisfy 0 < s2 < s1 < 1, got s1={self.s1}, s2={self.s2}"
            )
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")

    def require_subcritical(self) -> None:
        """Check N > 2 s1, the standing hypothesis of every bound formula.

        This also guarantees N > 2 s2, so Gamma((N - 2 s2)/2) is evaluated
        at a positive argument.
        """
        if self.N <= 2.0 * self.s1:
            raise PreconditionError(
                f"bound formulas require N > 2 s1 (N={self.N}, s1={self.s1})"
            )

    def require_nonnegative_mu(self) -> None:
        if self.mu < 0.0:
            raise PreconditionError(f"this operation requires mu >= 0, got {self.mu}")


@dataclass(frozen=True)
class Domain1D:
    """Uniform grid on the interval (a, b) with n interior nodes.

    Nodes are x_i = a + i h for i = 1..n with h = (b - a)/(n + 1); the
    piecewise-linear basis functions attached to them vanish identically
    outside (a, b).
    """

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.b <= self.a:
            raise DomainError(f"need b > a, got a={self.a}, b={self.b}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError(f"interior node count must be >= 1, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    @property
    def volume(self) -> float:
        return self.b - self.a

    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)

    def as_formula_domain(self) -> "FormulaDomain":
        return FormulaDomain(N=1, volume=self.volume)


@dataclass(frozen=True)
class FormulaDomain:
    """Volume-only domain descriptor for bound-formula evaluation at any N."""

    N: int
    volume: float

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N <= 0:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not math.isfinite(self.volume) or self.volume <= 0.0:
            raise DomainError(f"volume must be positive, got {self.volume}")


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense symmetric matrix carrying one of the Galerkin forms.

    The entries array is frozen read-only and must be bit-for-bit symmetric;
    `label` says which form it represents, `s` the fractional order where
    applicable (None for the mass form).
    """

    order: int
    entries: np.ndarray
    label: str
    s: float | None = None

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=float)
        if ent.shape != (self.order, self.order):
            raise DomainError(
                f"entries shape {ent.shape} does not match order {self.order}"
            )
        if not np.array_equal(ent, ent.T):
            raise DomainError(f"matrix '{self.label}' is not exactly symmetric")
        ent = ent.copy()
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    def to_csv(self, path) -> None:
        """Row-major full-matrix CSV: header 'n,s,label', 17 significant digits."""
        with open(path, "w") as fh:
            s_txt = "" if self.s is None else format(self.s, ".17g")
            fh.write(f"{self.order},{s_txt},{self.label}\n")
            for row in self.entries:
                fh.write(",".join(format(v, ".16e") for v in row) + "\n")


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with B-orthonormal eigenvectors.

    eigenvectors[:, j] is the coefficient vector of the j-th discrete
    eigenfunction; b_label records the right-hand form B used.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    b_label: str

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float).copy()
        vecs = np.asarray(self.eigenvectors, dtype=float).copy()
        if vals.ndim != 1 or vecs.ndim != 2 or vecs.shape[1] != vals.shape[0]:
            raise DomainError("eigenvalues/eigenvectors shapes are inconsistent")
        if np.any(np.diff(vals) < 0.0):
            raise DomainError("eigenvalues must be ascending")
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @property
    def k(self) -> int:
        return self.eigenvalues.shape[0]
