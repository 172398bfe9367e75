"""Numerical realization of the nonlocal operator.

Galerkin matrices for the fractional seminorm with the exact exterior
correction, a pointwise principal-value evaluator, the boundary cutoff,
the plane-wave commutator remainder, and the two kernel-bound formulas.

Singular pieces of every integral are reduced to closed forms (power
moments against shifted kernels, triangle-separated corner integrals);
only smooth remainders are handled by adaptive Gauss panels, so per-entry
accuracy is limited by the smooth quadrature alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .core import (
    Domain1D,
    DomainError,
    NumericError,
    PreconditionError,
    SymmetricMatrix,
    frac_norm_const,
)

_OMEGA0 = 2.0  # surface area of the unit sphere in R^1


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for the smooth-quadrature paths of the assembler and evaluators."""

    gauss_order: int = 16
    split_radius_factor: float = 1.0
    tail_radius: float | None = None  # None: derived from the analytic tail bound
    per_entry_rel_tol: float = 1e-8

    def __post_init__(self):
        if self.gauss_order < 4:
            raise DomainError(f"gauss_order must be >= 4, got {self.gauss_order}")
        if self.per_entry_rel_tol <= 0.0 or self.split_radius_factor <= 0.0:
            raise DomainError("quadrature tolerances and factors must be positive")


@lru_cache(maxsize=None)
def _gauss01(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _gauss_interval(f, a: float, b: float, order: int):
    x, w = _gauss01(order)
    t = a + (b - a) * x
    return (b - a) * np.sum(w * f(t))


def _adaptive_1d(f, a, b, rel_tol, order, label, depth=0, scale=0.0):
    """Recursive Gauss quadrature: accept when order and order+8 agree."""
    coarse = _gauss_interval(f, a, b, order)
    fine = _gauss_interval(f, a, b, order + 8)
    if abs(fine - coarse) <= rel_tol * max(abs(fine), scale) or depth >= 40:
        if depth >= 40:
            raise NumericError(f"quadrature failed to converge for {label}")
        return fine
    mid = 0.5 * (a + b)
    half_scale = max(scale, abs(fine))
    return _adaptive_1d(
        f, a, mid, rel_tol, order, label, depth + 1, half_scale
    ) + _adaptive_1d(f, mid, b, rel_tol, order, label, depth + 1, half_scale)


def _adaptive_1d_pieces(f, breaks, rel_tol, order, label):
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo:
            total += _adaptive_1d(f, lo, hi, rel_tol, order, label)
    return total


def _tensor_gauss(f2, x0, x1, y0, y1, order):
    gx, gw = _gauss01(order)
    xs = x0 + (x1 - x0) * gx
    ys = y0 + (y1 - y0) * gx
    vals = f2(xs[:, None], ys[None, :])
    return (x1 - x0) * (y1 - y0) * float(gw @ vals @ gw)


def _adaptive_2d(f2, x0, x1, y0, y1, rel_tol, order, label, depth=0, scale=0.0):
    coarse = _tensor_gauss(f2, x0, x1, y0, y1, order)
    fine = _tensor_gauss(f2, x0, x1, y0, y1, order + 8)
    if abs(fine - coarse) <= rel_tol * max(abs(fine), scale):
        return fine
    if depth >= 12:
        raise NumericError(f"2-D quadrature failed to converge for {label}")
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    sc = max(scale, abs(fine))
    return sum(
        _adaptive_2d(f2, a0, a1, b0, b1, rel_tol, order, label, depth + 1, sc)
        for (a0, a1) in ((x0, xm), (xm, x1))
        for (b0, b1) in ((y0, ym), (ym, y1))
    )


# -- exact moments against shifted power kernels ------------------------------


def _power_antideriv(q: float, lo: float, hi: float) -> float:
    """int_lo^hi t^q dt, with the logarithmic branch at q = -1."""
    if abs(q + 1.0) < 1e-13:
        return math.log(hi / lo)
    return (hi ** (q + 1.0) - lo ** (q + 1.0)) / (q + 1.0)


def _power_moment(p: int, e: float, g: float, h: float) -> float:
    """int_0^h u^p (u + g)^e du, exact, for integer p >= 0 and g >= 0."""
    if -1e-12 * h < g < 0.0:  # exact zero perturbed by roundoff
        g = 0.0
    if g < 0.0 or h <= 0.0:
        raise DomainError("power moment needs g >= 0, h > 0")
    if g == 0.0:
        if p + e <= -1.0:
            raise NumericError(f"divergent moment: p={p}, e={e}, g=0")
        return h ** (p + e + 1.0) / (p + e + 1.0)
    total = 0.0
    for k in range(p + 1):
        total += math.comb(p, k) * (-g) ** (p - k) * _power_antideriv(k + e, g, g + h)
    return total


def _poly_moment(coeffs, e: float, g: float, h: float) -> float:
    """int_0^h P(u) (u + g)^e du for P given by ascending monomial coeffs."""
    cmax = max((abs(c) for c in coeffs), default=0.0)
    if -1e-12 * h < g <= 0.0:
        # coefficients that vanish analytically but not in floating point
        # would otherwise feed a divergent moment
        coeffs = [0.0 if abs(c) <= 1e-12 * cmax else c for c in coeffs]
    return sum(
        c * _power_moment(p, e, g, h) for p, c in enumerate(coeffs) if c != 0.0
    )


def _poly_flip(coeffs, h: float):
    """Coefficients of P(h - u) given those of P(u), for quadratics."""
    c0 = coeffs[0] if len(coeffs) > 0 else 0.0
    c1 = coeffs[1] if len(coeffs) > 1 else 0.0
    c2 = coeffs[2] if len(coeffs) > 2 else 0.0
    return (c0 + c1 * h + c2 * h * h, -(c1 + 2.0 * c2 * h), c2)


def _poly_mul_linear(a0, a1, b0, b1):
    return (a0 * b0, a0 * b1 + a1 * b0, a1 * b1)


def _half_power_integral(q: int, e: float) -> float:
    """int_0^1 t^q (1 + t)^e dt in closed form, q in {0, 1, 2}."""

    def B(r: float) -> float:
        if abs(r) < 1e-13:
            return math.log(2.0)
        return (2.0**r - 1.0) / r

    if q == 0:
        return B(e + 1.0)
    if q == 1:
        return B(e + 2.0) - B(e + 1.0)
    if q == 2:
        return B(e + 3.0) - 2.0 * B(e + 2.0) + B(e + 1.0)
    raise DomainError(f"unsupported monomial degree {q}")


def _corner_moment(p: int, q: int, e: float, h: float) -> float:
    """int_0^h int_0^h u^p v^q (u + v)^e du dv, exact via the diagonal split."""
    expo = p + q + e + 2.0
    if expo <= 0.0:
        raise NumericError(f"divergent corner moment: p={p}, q={q}, e={e}")
    return h**expo / expo * (_half_power_integral(q, e) + _half_power_integral(p, e))


# -- stiffness assembly -------------------------------------------------------


def _hat_slope(i: int, m: int, h: float) -> float:
    """Slope of the hat centered at node i on element m (elements 0..n)."""
    if m == i - 1:
        return 1.0 / h
    if m == i:
        return -1.0 / h
    return 0.0


def _hat_local(i: int, m: int, h: float):
    """(value at left end, slope) of hat i restricted to element m."""
    return (1.0 if m == i else 0.0, _hat_slope(i, m, h))


def _same_element_kernel_moment(s: float, h: float) -> float:
    """int int_{E x E} (x - y)^2 |x - y|^{-1-2s} dx dy, exact."""
    return 2.0 * h ** (3.0 - 2.0 * s) * (1.0 / (2.0 - 2.0 * s) - 1.0 / (3.0 - 2.0 * s))


def _interaction_block(i, j, s, h, quad, label):
    """Double integral of the hat-difference product over the support hull.

    Covers the singular near-diagonal region of the Omega x Omega integral;
    translation invariant, so callers evaluate it once per lag.
    """
    e = -1.0 - 2.0 * s
    elems = sorted({i - 1, i, j - 1, j})
    csame = _same_element_kernel_moment(s, h)
    total = 0.0
    for a_idx, m in enumerate(elems):
        for l in elems[a_idx:]:
            mult = 1.0 if m == l else 2.0  # unordered pair counted both ways
            if m == l:
                total += _hat_slope(i, m, h) * _hat_slope(j, m, h) * csame * mult
            elif l == m + 1:
                # shared node: differences vanish there, corner moments exact
                sli, sri = _hat_slope(i, m, h), _hat_slope(i, l, h)
                slj, srj = _hat_slope(j, m, h), _hat_slope(j, l, h)
                val = (
                    sli * slj * _corner_moment(2, 0, e, h)
                    + (sli * srj + sri * slj) * _corner_moment(1, 1, e, h)
                    + sri * srj * _corner_moment(0, 2, e, h)
                )
                total += val * mult
            else:
                shift = (l - m) * h
                aim, bim = _hat_local(i, m, h)
                ajm, bjm = _hat_local(j, m, h)
                ail, bil = _hat_local(i, l, h)
                ajl, bjl = _hat_local(j, l, h)

                def f2(u, v):
                    # x = left(E_m) + u, y = left(E_l) + v; y - x >= h > 0
                    di = (aim + bim * u) - (ail + bil * v)
                    dj = (ajm + bjm * u) - (ajl + bjl * v)
                    return di * dj * (shift + v - u) ** e

                total += mult * _adaptive_2d(
                    f2, 0.0, h, 0.0, h, quad.per_entry_rel_tol, quad.gauss_order, label
                )
    return total


def _product_far_field(i, j, dom: Domain1D, s: float) -> float:
    """int phi_i phi_j (x) * int_{Omega minus hull} |x-y|^{-1-2s} dy dx, exact.

    The hull is the union of the two hat supports; the inner integral in y
    is (1/2s) [ (x-L)^{-2s} - (x-a)^{-2s} + (R-x)^{-2s} - (b-x)^{-2s} ]
    with the left/right pieces dropped when the hull touches the boundary.
    """
    h, a, b = dom.h, dom.a, dom.b
    lo, hi = min(i, j), max(i, j)
    L = a + (lo - 1) * h
    R = a + (hi + 1) * h
    e = -2.0 * s
    total = 0.0
    for m in range(lo - 1, hi + 1):
        # product support: elements where both hats are nonzero
        vi, si = _hat_local(i, m, h)
        vj, sj = _hat_local(j, m, h)
        if (vi == 0.0 and si == 0.0) or (vj == 0.0 and sj == 0.0):
            continue
        coeffs = _poly_mul_linear(vi, si, vj, sj)
        if all(c == 0.0 for c in coeffs):
            continue
        xm = a + m * h
        left_piece = 0.0
        if L > a + 1e-15 * (b - a):
            left_piece += _poly_moment(coeffs, e, xm - L, h)
            left_piece -= _poly_moment(coeffs, e, xm - a, h)
        right_piece = 0.0
        if R < b - 1e-15 * (b - a):
            flipped = _poly_flip(coeffs, h)
            right_piece += _poly_moment(flipped, e, R - xm - h, h)
            right_piece -= _poly_moment(flipped, e, b - xm - h, h)
        total += left_piece + right_piece
    return total / (2.0 * s)


def exterior_weight_integral(i: int, j: int, dom: Domain1D, s: float) -> float:
    """int_Omega phi_i phi_j kappa dx with kappa the exact exterior kernel mass.

    kappa(x) = (1/2s) [ (x-a)^{-2s} + (b-x)^{-2s} ]; exact in closed form
    because the hats are piecewise linear.
    """
    h, a, b = dom.h, dom.a, dom.b
    lo, hi = min(i, j), max(i, j)
    if hi - lo >= 2:
        return 0.0
    e = -2.0 * s
    total = 0.0
    for m in range(lo - 1, hi + 1):
        vi, si = _hat_local(i, m, h)
        vj, sj = _hat_local(j, m, h)
        if (vi == 0.0 and si == 0.0) or (vj == 0.0 and sj == 0.0):
            continue
        coeffs = _poly_mul_linear(vi, si, vj, sj)
        xm = a + m * h
        total += _poly_moment(coeffs, e, xm - a, h)
        total += _poly_moment(_poly_flip(coeffs, h), e, b - xm - h, h)
    return total / (2.0 * s)


def _cross_lag_integral(d: int, s: float, h: float, quad, label) -> float:
    """- int int phi_i(x) phi_j(y) |x-y|^{-1-2s} over the two supports, lag d >= 2.

    Doubled relative to the ordered Omega x Omega decomposition by symmetry,
    translation invariant in the node pair.
    """
    e = -1.0 - 2.0 * s
    total = 0.0
    for m_side in (0, 1):  # element of hat i: i-1 (left) or i (right)
        for l_side in (0, 1):  # element of hat j: j-1 or j
            gap = (d - 2 + l_side + (1 - m_side)) * h
            # x = right end of E_m minus u; y = left end of E_l plus v
            # hat i in u: m=i-1 -> 1 - u/h ; m=i -> u/h
            # hat j in v: l=j-1 -> v/h    ; l=j -> 1 - v/h
            iu = (1.0, -1.0 / h) if m_side == 0 else (0.0, 1.0 / h)
            jv = (0.0, 1.0 / h) if l_side == 0 else (1.0, -1.0 / h)
            if gap == 0.0:
                # touching corner, product vanishes there: exact moments
                val = 0.0
                for p, cu in enumerate(iu):
                    for q, cv in enumerate(jv):
                        if cu != 0.0 and cv != 0.0:
                            val += cu * cv * _corner_moment(p, q, e, h)
                total += val
            else:

                def f2(u, v):
                    return (
                        (iu[0] + iu[1] * u)
                        * (jv[0] + jv[1] * v)
                        * (gap + u + v) ** e
                    )

                total += _adaptive_2d(
                    f2, 0.0, h, 0.0, h, quad.per_entry_rel_tol, quad.gauss_order, label
                )
    return -2.0 * total


def assemble_stiffness(
    dom: Domain1D, s: float, quad: QuadratureSpec | None = None
) -> SymmetricMatrix:
    """Galerkin matrix of the order-s fractional form over interior hats.

    entry(i, j) = (c/2) * double integral over Omega x Omega of the
    hat-difference product against |x-y|^{-1-2s}, plus the exact exterior
    correction c * int phi_i phi_j kappa.  Symmetric positive definite.
    """
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    if quad is None:
        quad = QuadratureSpec()
    n, h = dom.n, dom.h
    c = frac_norm_const(1, s)
    ent = np.zeros((n, n))

    # translation-invariant near-diagonal blocks (lag 0 and 1)
    block0 = _interaction_block(1, 1, s, h, quad, "lag-0 block")
    block1 = _interaction_block(1, 2, s, h, quad, "lag-1 block") if n >= 2 else 0.0

    for d in range(2, n):
        val = c * _cross_lag_integral(d, s, h, quad, f"lag-{d} cross") / 2.0
        for i in range(1, n + 1 - d):
            ent[i - 1, i - 1 + d] = val
            ent[i - 1 + d, i - 1] = val

    for i in range(1, n + 1):
        ff = _product_far_field(i, i, dom, s)
        kap = exterior_weight_integral(i, i, dom, s)
        ent[i - 1, i - 1] = 0.5 * c * (block0 + 2.0 * ff) + c * kap
        if i < n:
            ff1 = _product_far_field(i, i + 1, dom, s)
            kap1 = exterior_weight_integral(i, i + 1, dom, s)
            val = 0.5 * c * (block1 + 2.0 * ff1) + c * kap1
            ent[i - 1, i] = val
            ent[i, i - 1] = val

    return SymmetricMatrix(order=n, entries=ent, label=f"E_s{s:g}", s=s)


def assemble_omega_double_integral_part(
    dom: Domain1D, s: float, quad: QuadratureSpec | None = None
) -> SymmetricMatrix:
    """The (c/2) * Omega x Omega double-integral part alone, without the
    exterior correction; exposed so the positive-semidefiniteness of the
    correction can be checked as corrected matrix minus this one.
    """
    full = assemble_stiffness(dom, s, quad)
    c = frac_norm_const(1, s)
    n = dom.n
    corr = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i, min(i + 2, n + 1)):
            v = c * exterior_weight_integral(i, j, dom, s)
            corr[i - 1, j - 1] = v
            corr[j - 1, i - 1] = v
    return SymmetricMatrix(
        order=n, entries=full.entries - corr, label=f"E_s{s:g}-interior", s=s
    )


def assemble_mass(dom: Domain1D) -> SymmetricMatrix:
    """L^2 mass matrix of the interior hats: tridiagonal (h/6, 2h/3, h/6)."""
    n, h = dom.n, dom.h
    ent = np.zeros((n, n))
    np.fill_diagonal(ent, 2.0 * h / 3.0)
    idx = np.arange(n - 1)
    ent[idx, idx + 1] = h / 6.0
    ent[idx + 1, idx] = h / 6.0
    return SymmetricMatrix(order=n, entries=ent, label="mass")


# -- smoothstep profile and cutoff --------------------------------------------


def _smoothstep(t: float) -> float:
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    return t * t * (3.0 - 2.0 * t)


def _smoothstep_d1(t: float) -> float:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return 6.0 * t * (1.0 - t)


def _smoothstep_d2(t: float) -> float:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return 6.0 - 12.0 * t


@dataclass(frozen=True)
class CutoffFunction:
    """C^2 approximation of the indicator of the interval.

    w(x) = eta(rho(x)/sigma) with rho the distance to the complement and
    eta the cubic smoothstep; identically 1 at depth >= sigma, identically 0
    outside.  K1 and K2 are the profile's derivative sups (the cutoff's own
    derivative bounds are K1/sigma and K2/sigma^2).
    """

    sigma: float
    domain: Domain1D

    K1 = 1.5
    K2 = 6.0

    def __post_init__(self):
        half = 0.5 * (self.domain.b - self.domain.a)
        if not (0.0 < self.sigma <= half):
            raise DomainError(
                f"sigma must lie in (0, (b-a)/2], got {self.sigma} vs half-width {half}"
            )

    def _rho(self, x: float) -> float:
        return max(0.0, min(x - self.domain.a, self.domain.b - x))

    def __call__(self, x: float) -> float:
        return _smoothstep(self._rho(x) / self.sigma)

    def d1(self, x: float) -> float:
        a, b = self.domain.a, self.domain.b
        if not (a < x < b):
            return 0.0
        sign = 1.0 if (x - a) <= (b - x) else -1.0
        return sign * _smoothstep_d1(self._rho(x) / self.sigma) / self.sigma

    def d2(self, x: float) -> float:
        a, b = self.domain.a, self.domain.b
        if not (a < x < b):
            return 0.0
        return _smoothstep_d2(self._rho(x) / self.sigma) / self.sigma**2

    def as_smooth_function(self) -> "SmoothCompactFunction":
        return SmoothCompactFunction(
            f=self.__call__, support=(self.domain.a, self.domain.b), d2=self.d2
        )

    def kinks(self):
        a, b, s = self.domain.a, self.domain.b, self.sigma
        return (a, a + s, b - s, b)


@dataclass(frozen=True)
class SmoothCompactFunction:
    """Callable with compact support and an explicit second derivative.

    The support interval and d2 are required metadata for the principal-value
    evaluator; outside the support the function evaluates to exactly zero.
    """

    f: Callable[[float], float]
    support: tuple[float, float]
    d2: Callable[[float], float]

    def __post_init__(self):
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
            raise PreconditionError(f"invalid support interval {self.support}")
        if not callable(self.f) or not callable(self.d2):
            raise PreconditionError("f and d2 must be callables")

    def __call__(self, x: float) -> float:
        lo, hi = self.support
        if x <= lo or x >= hi:
            return 0.0
        return self.f(x)


def windowed_plane_wave(z: float, L: float, width: float = 8.0) -> SmoothCompactFunction:
    """cos(z x) times a smoothstep window: 1 on [-L+width, L-width], 0 past |x|=L."""
    if not (0.0 < 2.0 * width < 2.0 * L):
        raise DomainError("need 0 < width < L")

    def win(x):
        return _smoothstep((x + L) / width) * _smoothstep((L - x) / width)

    def win_d1(x):
        return (
            _smoothstep_d1((x + L) / width) * _smoothstep((L - x) / width)
            - _smoothstep((x + L) / width) * _smoothstep_d1((L - x) / width)
        ) / width

    def win_d2(x):
        return (
            _smoothstep_d2((x + L) / width) * _smoothstep((L - x) / width)
            - 2.0 * _smoothstep_d1((x + L) / width) * _smoothstep_d1((L - x) / width)
            + _smoothstep((x + L) / width) * _smoothstep_d2((L - x) / width)
        ) / width**2

    def f(x):
        return math.cos(z * x) * win(x)

    def d2(x):
        return (
            -z * z * math.cos(z * x) * win(x)
            - 2.0 * z * math.sin(z * x) * win_d1(x)
            + math.cos(z * x) * win_d2(x)
        )

    return SmoothCompactFunction(f=f, support=(-L, L), d2=d2)


def pointwise_fraclap(
    u, s: float, x: float, quad: QuadratureSpec | None = None
) -> float:
    """Principal-value fractional Laplacian at a point, via the symmetric
    second-difference form.

    Near zero the second difference is replaced by its Taylor term and
    integrated exactly; the compact support makes the far tail exactly
    2 u(x) T^{-2s} / (2s).
    """
    if not isinstance(u, SmoothCompactFunction):
        raise PreconditionError(
            "pointwise_fraclap needs a SmoothCompactFunction (support and d2 metadata)"
        )
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    if not math.isfinite(x):
        raise PreconditionError(f"evaluation point must be finite, got {x}")
    if quad is None:
        quad = QuadratureSpec()

    lo, hi = u.support
    T = max(hi - x, x - lo)
    if quad.tail_radius is not None:
        T = max(T, quad.tail_radius)
    delta = min(1e-4 * max(1.0, hi - lo), 0.25 * T)

    ux = u(x)
    inner = -u.d2(x) * delta ** (2.0 - 2.0 * s) / (2.0 - 2.0 * s) if lo < x < hi else 0.0
    tail = 2.0 * ux * T ** (-2.0 * s) / (2.0 * s)

    def integrand(z):
        vals = np.empty_like(z)
        for idx, zeta in np.ndenumerate(z):
            vals[idx] = 2.0 * ux - u(x + zeta) - u(x - zeta)
        return vals * z ** (-1.0 - 2.0 * s)

    breaks = [delta]
    b = delta
    while b < 1.0 and 2.0 * b < T:
        b *= 2.0
        breaks.append(min(b, T))
    for kink in (abs(x - lo), abs(x - hi), abs(hi - x), abs(lo - x)):
        if delta < kink < T:
            breaks.append(kink)
    breaks.append(T)
    breaks = sorted(set(breaks))

    middle = _adaptive_1d_pieces(
        integrand, breaks, quad.per_entry_rel_tol, quad.gauss_order, "pointwise kernel"
    )
    c = frac_norm_const(1, s)
    return c * (inner + middle + tail)


# -- commutator remainder L^s_z -----------------------------------------------


def _osc_tail_integral(z: float, p: float, T: float) -> complex:
    """int_T^infinity e^{i z t} t^{-p} dt via the upper incomplete gamma."""
    a = mpmath.mpf(1.0 - p)
    w = mpmath.mpc(0.0, -z) * T
    val = mpmath.power(mpmath.mpc(0.0, -z), p - 1.0) * mpmath.gammainc(a, w)
    return complex(val)


def lz_apply(
    w, s: float, z: float, x: float, quad: QuadratureSpec | None = None
) -> complex:
    """Commutator-type remainder of applying the fractional Laplacian to a
    cutoff times a plane wave:

    c int (w(x) - w(xt)) (e^{i xt z} - e^{i x z}) |x - xt|^{-1-2s} dxt.

    The integrand is quadratically small at the singularity; the constant-w
    exterior tails are evaluated analytically (oscillatory part through the
    incomplete gamma function).
    """
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    if quad is None:
        quad = QuadratureSpec()
    p = 1.0 + 2.0 * s
    c = frac_norm_const(1, s)

    dom = getattr(w, "domain", None)
    wx = w(x)
    d1x = w.d1(x) if hasattr(w, "d1") else 0.0

    if dom is None:
        support = None
        t_plus = t_minus = 1.0
        kinks = ()
    else:
        support = (dom.a, dom.b)
        if not (dom.a < x < dom.b):
            raise PreconditionError("evaluation point must lie inside the domain")
        t_plus = dom.b - x
        t_minus = x - dom.a
        kinks = w.kinks() if hasattr(w, "kinks") else support

    delta = min(1e-4, 0.25 * t_plus, 0.25 * t_minus)
    inner = -2.0j * z * d1x * delta ** (2.0 - 2.0 * s) / (2.0 - 2.0 * s)

    def side(direction, t_max):
        def g_re(t):
            vals = np.empty_like(t)
            for idx, tv in np.ndenumerate(t):
                dw = wx - w(x + direction * tv)
                osc = cmath.exp(1j * direction * tv * z) - 1.0
                vals[idx] = (dw * osc).real
            return vals * t**-p

        def g_im(t):
            vals = np.empty_like(t)
            for idx, tv in np.ndenumerate(t):
                dw = wx - w(x + direction * tv)
                osc = cmath.exp(1j * direction * tv * z) - 1.0
                vals[idx] = (dw * osc).imag
            return vals * t**-p

        breaks = [delta]
        b = delta
        while b < t_max:
            b = min(b * 2.0, b + max(0.2, math.pi / (2.0 * max(abs(z), 1.0))))
            breaks.append(min(b, t_max))
        for kp in kinks:
            tk = direction * (kp - x)
            if delta < tk < t_max:
                breaks.append(tk)
        breaks = sorted(set(breaks))
        re = _adaptive_1d_pieces(
            g_re, breaks, quad.per_entry_rel_tol, quad.gauss_order, "Lz kernel (re)"
        )
        im = _adaptive_1d_pieces(
            g_im, breaks, quad.per_entry_rel_tol, quad.gauss_order, "Lz kernel (im)"
        )
        return re + 1j * im

    middle = side(+1.0, t_plus) + side(-1.0, t_minus)

    if support is None:
        tails = 0.0 + 0.0j
    else:
        tails = wx * (
            _osc_tail_integral(z, p, t_plus)
            - t_plus ** (-2.0 * s) / (2.0 * s)
            + _osc_tail_integral(-z, p, t_minus)
            - t_minus ** (-2.0 * s) / (2.0 * s)
        )

    return c * cmath.exp(1j * x * z) * (inner + middle + tails)


# -- kernel bound formulas ----------------------------------------------------


class CutoffKernelBound(NamedTuple):
    derived: float
    stated: float


def lemma22_bound(s: float, sigma: float, K2: float = CutoffFunction.K2) -> CutoffKernelBound:
    """Sup bound for |(-Delta)^s w_sigma| on the domain.

    derived: the parametric bound from the second-difference estimate
    min{4, K2 sigma^{-2} zeta^2}, split at the optimal radius 2 sigma/sqrt(K2);
    stated: the published constant 2 c omega sigma^{-2s}.  The derived bound
    is the one the package gates on.
    """
    if sigma <= 0.0 or K2 <= 0.0:
        raise DomainError("sigma and K2 must be positive")
    c = frac_norm_const(1, s)
    rho_star = 2.0 / math.sqrt(K2)
    derived = (
        0.5
        * c
        * _OMEGA0
        * sigma ** (-2.0 * s)
        * (
            K2 * rho_star ** (2.0 - 2.0 * s) / (2.0 - 2.0 * s)
            + 4.0 * rho_star ** (-2.0 * s) / (2.0 * s)
        )
    )
    stated = 2.0 * c * _OMEGA0 * sigma ** (-2.0 * s)
    return CutoffKernelBound(derived=derived, stated=stated)


def lemma23_bound(
    s: float,
    sigma: float,
    z: float,
    R: float,
    K1: float = CutoffFunction.K1,
) -> CutoffKernelBound:
    """Case bound for the commutator remainder |L^s_z w_sigma| on the domain.

    derived uses the cutoff's actual Lipschitz constant K1/sigma and the
    proof's exterior term omega R^{-2s}/s; stated is the published display
    (Lipschitz factor 2/sigma, exterior term omega R^{-2s}/(2s)).  The case
    is selected by the sign of s - 1/2.
    """
    if abs(z) <= 1.0:
        raise PreconditionError(f"the case bounds require |z| > 1, got {z}")
    if R < 1.0:
        raise PreconditionError(f"need R >= 1, got {R}")
    if sigma <= 0.0 or K1 <= 0.0:
        raise DomainError("sigma and K1 must be positive")
    if not (0.0 < s < 1.0):
        raise DomainError(f"order s must lie in (0, 1), got {s}")
    c = frac_norm_const(1, s)
    az = abs(z)
    omega = _OMEGA0

    def case_sum(lip: float, ext: float) -> float:
        t1 = omega * lip / sigma * az ** (2.0 * s - 1.0) / (2.0 - 2.0 * s)
        if s > 0.5:
            t2 = 2.0 * lip / sigma * omega * az ** (2.0 * s - 1.0) / (2.0 * s - 1.0)
        elif s == 0.5:
            t2 = 2.0 * lip / sigma * omega * (math.log(az) + math.log(4.0 * R))
        else:
            t2 = 2.0 * lip / sigma * omega * (4.0 * R) ** (1.0 - 2.0 * s) / (1.0 - 2.0 * s)
        return t1 + t2 + ext

    derived = c * case_sum(K1, omega * R ** (-2.0 * s) / s)
    stated = c * case_sum(2.0, omega * R ** (-2.0 * s) / (2.0 * s))
    return CutoffKernelBound(derived=derived, stated=stated)
