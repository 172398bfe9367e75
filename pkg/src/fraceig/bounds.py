"""Closed-form constants and inequality sides for the eigenvalue bounds.

Two independent routes are kept for the leading lower-bound constant b1:
the explicit display and the composition of the auxiliary constants
a(N, s2) and a0 it was assembled from.  Their agreement is a standing
invariant checked by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    DomainError,
    FormulaDomain,
    NumericError,
    PreconditionError,
    ProblemParams,
    gamma,
    sphere_area,
    unit_ball_volume,
)


def weyl_const(N: int, s: float) -> float:
    """Leading Weyl constant a(N, s) = (2 pi)^{2s} |B_1|^{-2s/N}."""
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    return (2.0 * math.pi) ** (2.0 * s) * unit_ball_volume(N) ** (-2.0 * s / N)


def fundamental_solution_const(N: int, s2: float) -> float:
    """Constant a(N, s2) of the fundamental solution of the order-s2 operator.

    a(N, s2) = 2^{-2 s2} pi^{-N/2} Gamma((N - 2 s2)/2) / Gamma(s2 + 1) * s2,
    valid for N > 2 s2.
    """
    if not (0.0 < s2 < 1.0):
        raise DomainError(f"order s2 must lie in (0, 1), got {s2}")
    if N <= 2.0 * s2:
        raise PreconditionError(f"need N > 2 s2 (N={N}, s2={s2})")
    return (
        2.0 ** (-2.0 * s2)
        * math.pi ** (-N / 2.0)
        * gamma((N - 2.0 * s2) / 2.0)
        / gamma(s2 + 1.0)
        * s2
    )


def rearrangement_const(N: int, s2: float) -> float:
    """Sharp constant a0 of the rearranged kernel integral.

    a0 = (1/(2 s2)) N^{2 s2 / N} omega^{1 - 2 s2 / N}, omega the unit-sphere
    area in R^N.
    """
    if not (0.0 < s2 < 1.0):
        raise DomainError(f"order s2 must lie in (0, 1), got {s2}")
    omega = sphere_area(N)
    return N ** (2.0 * s2 / N) * omega ** (1.0 - 2.0 * s2 / N) / (2.0 * s2)


def _b1_inner_display(N: int, s2: float) -> float:
    """The bracketed product in the published b1/b2 displays."""
    omega = sphere_area(N)
    return (
        2.0 ** (-(N + 1.0 + 2.0 * s2))
        * math.pi ** (-1.5 * N)
        * omega ** (2.0 - 2.0 * s2 / N)
        * gamma((N - 2.0 * s2) / 2.0)
        / gamma(s2 + 1.0)
        * N ** (2.0 * s2 / N)
    )


def _b1_inner_proof(N: int, s2: float) -> float:
    """The same bracket assembled along the proof route.

    (2 pi)^{-N} * a(N, s2) * a0 * omega; agrees with the display bracket
    to rounding.
    """
    omega = sphere_area(N)
    return (
        (2.0 * math.pi) ** (-float(N))
        * fundamental_solution_const(N, s2)
        * rearrangement_const(N, s2)
        * omega
    )


def _b1_from_inner(N: int, s1: float, s2: float, inner: float) -> float:
    t1 = 2.0 * s1 + N
    t2 = 2.0 * s2 + N
    return t2 ** (t1 / t2) / t1 * inner ** (-2.0 * (s1 - s2) / t2)


def _b2_from_b1(N: int, s1: float, s2: float, b1: float, inner: float) -> float:
    t1 = 2.0 * s1 + N
    t2 = 2.0 * s2 + N
    return b1 * t1 / (N * t2 ** (2.0 * s2 / t2)) * inner ** (2.0 * s2 / t2)


def upper_const_b3(N: int, s1: float, s2: float) -> float:
    """Leading constant b3 of the eigenvalue-sum upper bound."""
    s = s1 - s2
    omega = sphere_area(N)
    return (
        (2.0 * math.pi) ** (2.0 * s)
        * omega ** (-2.0 * s / N)
        * N ** (1.0 + 2.0 * s / N)
        / (N + 2.0 * s)
    )


@dataclass(frozen=True)
class BoundConstants:
    """All scalar constants entering the bound formulas for one parameter set."""

    a_weyl: float  # a(N, s1 - s2)
    b1: float
    b2: float
    b3: float
    a_Ns2: float
    a0: float
    b1_proof_route: float  # b1 re-derived through a(N,s2), a0


def bly_constants(params: ProblemParams) -> BoundConstants:
    """Evaluate b1, b2, b3 and the auxiliary constants for given parameters.

    Requires N > 2 s1.
    """
    params.require_subcritical()
    N, s1, s2 = params.N, params.s1, params.s2
    inner = _b1_inner_display(N, s2)
    b1 = _b1_from_inner(N, s1, s2, inner)
    b1_proof = _b1_from_inner(N, s1, s2, _b1_inner_proof(N, s2))
    return BoundConstants(
        a_weyl=weyl_const(N, s1 - s2),
        b1=b1,
        b2=_b2_from_b1(N, s1, s2, b1, inner),
        b3=upper_const_b3(N, s1, s2),
        a_Ns2=fundamental_solution_const(N, s2),
        a0=rearrangement_const(N, s2),
        b1_proof_route=b1_proof,
    )


def lower_bound_sum(params: ProblemParams, dom: FormulaDomain, k: int) -> float:
    """Right-hand side of the lower bound on the sum of the first k eigenvalues.

    b1 |Omega|^{-2(s1-s2)/N} k^{1 + 2(s1-s2)/(2 s2 + N)}
      - mu b2 |Omega|^{-2 s1/N} k^{1 + (2 s1 - 4 s2)/(2 s2 + N)}.
    May be negative (vacuous) for large mu.
    """
    params.require_subcritical()
    params.require_nonnegative_mu()
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    N, s1, s2, mu = params.N, params.s1, params.s2, params.mu
    c = bly_constants(params)
    vol = dom.volume
    t2 = 2.0 * s2 + N
    lead = c.b1 * vol ** (-2.0 * (s1 - s2) / N) * k ** (1.0 + 2.0 * (s1 - s2) / t2)
    shift = mu * c.b2 * vol ** (-2.0 * s1 / N) * k ** (1.0 + (2.0 * s1 - 4.0 * s2) / t2)
    return lead - shift


def lower_bound_single(params: ProblemParams, dom: FormulaDomain, k: int) -> float:
    """Per-eigenvalue lower bound: the sum bound with the k-exponents reduced by 1."""
    params.require_subcritical()
    params.require_nonnegative_mu()
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    N, s1, s2, mu = params.N, params.s1, params.s2, params.mu
    c = bly_constants(params)
    vol = dom.volume
    t2 = 2.0 * s2 + N
    lead = c.b1 * vol ** (-2.0 * (s1 - s2) / N) * k ** (2.0 * (s1 - s2) / t2)
    shift = mu * c.b2 * vol ** (-2.0 * s1 / N) * k ** ((2.0 * s1 - 4.0 * s2) / t2)
    return lead - shift


def upper_bound_leading(params: ProblemParams, dom: FormulaDomain, k: int) -> float:
    """Leading term of the eigenvalue-sum upper bound (mu = 0 regime).

    Only the computable leading coefficient is returned; the lower-order
    term has an existential constant and is not evaluated.
    """
    params.require_subcritical()
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    if params.s1 >= (1.0 + params.s2) / 2.0:
        raise PreconditionError(
            f"upper bound requires s1 < (1 + s2)/2, got s1={params.s1}, s2={params.s2}"
        )
    N, s1, s2 = params.N, params.s1, params.s2
    b3 = upper_const_b3(N, s1, s2)
    return b3 * dom.volume ** (-2.0 * (s1 - s2) / N) * k ** (1.0 + 2.0 * (s1 - s2) / N)


def single_frac_sum_asymptote(N: int, s: float, dom: FormulaDomain, k: int) -> float:
    """Leading term of the eigenvalue-sum law for the single fractional operator.

    N/(N + 2s) * a(N, s) * |Omega|^{-2s/N} * k^{1 + 2s/N}.
    """
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    return (
        N
        / (N + 2.0 * s)
        * weyl_const(N, s)
        * dom.volume ** (-2.0 * s / N)
        * k ** (1.0 + 2.0 * s / N)
    )


class MomentMajorant(NamedTuple):
    """Split radius and right-hand side of the moment inequality."""

    R: float
    rhs: float


def prop21_rhs(params: ProblemParams, M1: float, M2: float) -> MomentMajorant:
    """Majorant for int (|z|^{2 s2} + mu) f dz over admissible f.

    Admissible means 0 <= f <= M1 with int |z|^{2 s1} f dz <= M2.  Returns
    the split radius R of the extremal bang-bang profile together with the
    bound value; equality is attained at mu = 0 by f = M1 on the ball of
    radius R.
    """
    if not (M1 > 0.0 and M2 > 0.0):
        raise PreconditionError(f"M1 and M2 must be positive, got {M1}, {M2}")
    params.require_nonnegative_mu()
    N, s1, s2, mu = params.N, params.s1, params.s2, params.mu
    omega = sphere_area(N)
    R = ((2.0 * s1 + N) * M2 / (M1 * omega)) ** (1.0 / (2.0 * s1 + N))
    t2 = 2.0 * s2 + N
    rhs = omega * M1 / t2 * R**t2 * (1.0 + mu * t2 / N * R ** (-2.0 * s2))
    return MomentMajorant(R=R, rhs=rhs)


@dataclass(frozen=True)
class BracketResult:
    """Root of r^{tau1}(1 + r^{-tau2}) = d1 with its analytic bracket."""

    root: float
    lower: float
    upper: float


def lemma21_solve(tau1: float, tau2: float, d1: float) -> BracketResult:
    """Solve r^{tau1} (1 + r^{-tau2}) = d1 by bisection.

    The bracket is lower = d1^{1/tau1} (1 - (1/tau1) d1^{-tau2/tau1})_+ and
    upper = d1^{1/tau1}; the equation's left side is strictly increasing so
    bisection on [0, 2 upper] cannot stall.  Absolute tolerance 1e-12 * upper.
    """
    if not (1.0 > tau1 > tau2 > 0.0):
        raise PreconditionError(
            f"need 1 > tau1 > tau2 > 0, got tau1={tau1}, tau2={tau2}"
        )
    if d1 <= 0.0:
        raise PreconditionError(f"d1 must be positive, got {d1}")

    # the root can span hundreds of orders of magnitude across admissible
    # (tau1, d1), so bisect in log r for uniform relative accuracy
    log_upper = math.log(d1) / tau1
    upper = math.exp(log_upper)
    lower = upper * max(0.0, 1.0 - d1 ** (-tau2 / tau1) / tau1)

    def log_f(t: float) -> float:
        # log of r^{tau1} (1 + r^{-tau2}) at r = e^t
        return tau1 * t + math.log1p(math.exp(-tau2 * t))

    target = math.log(d1)
    hi = log_upper  # f(upper) = d1 (1 + upper^{-tau2}) > d1
    lo = log_upper - 1.0
    for _ in range(200):
        if log_f(lo) < target:
            break
        lo -= 2.0 * (log_upper - lo)
    else:
        raise NumericError("could not bracket the root from below")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_f(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13:
            break
    else:
        raise NumericError("bisection failed to converge")
    root = math.exp(0.5 * (lo + hi))
    return BracketResult(root=root, lower=lower, upper=upper)
