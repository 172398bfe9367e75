"""Verification lab for the mixed-order fractional Dirichlet eigenproblem

    (-Delta)^{s1} u = lambda ( (-Delta)^{s2} u + mu u )  in Omega,  u = 0 outside.

Discretizes both fractional forms with interior hat functions, solves the
resulting symmetric-definite pencil, and checks the computed spectrum
against closed-form lower and upper eigenvalue-sum bounds and the
single-operator Weyl asymptote.
"""

from .core import (
    DefinitenessError,
    Domain1D,
    DomainError,
    FormulaDomain,
    NumericError,
    PreconditionError,
    ProblemParams,
    Spectrum,
    SymmetricMatrix,
    frac_norm_const,
    gamma,
    sphere_area,
    unit_ball_volume,
)
from .bounds import (
    BoundConstants,
    BracketResult,
    MomentMajorant,
    bly_constants,
    lemma21_solve,
    lower_bound_single,
    lower_bound_sum,
    prop21_rhs,
    single_frac_sum_asymptote,
    upper_bound_leading,
    upper_const_b3,
    weyl_const,
)
from .eigen import GenEigProblem, cholesky_lower, rayleigh
from .fracop import (
    CutoffFunction,
    CutoffKernelBound,
    QuadratureSpec,
    SmoothCompactFunction,
    assemble_mass,
    assemble_stiffness,
    exterior_weight_integral,
    lemma22_bound,
    lemma23_bound,
    lz_apply,
    pointwise_fraclap,
    windowed_plane_wave,
)

__all__ = [
    "BoundConstants",
    "BracketResult",
    "CutoffFunction",
    "CutoffKernelBound",
    "DefinitenessError",
    "Domain1D",
    "DomainError",
    "FormulaDomain",
    "GenEigProblem",
    "MomentMajorant",
    "NumericError",
    "PreconditionError",
    "ProblemParams",
    "QuadratureSpec",
    "SmoothCompactFunction",
    "Spectrum",
    "SymmetricMatrix",
    "assemble_mass",
    "assemble_stiffness",
    "bly_constants",
    "cholesky_lower",
    "exterior_weight_integral",
    "frac_norm_const",
    "gamma",
    "lemma21_solve",
    "lemma22_bound",
    "lemma23_bound",
    "lower_bound_single",
    "lower_bound_sum",
    "lz_apply",
    "pointwise_fraclap",
    "prop21_rhs",
    "rayleigh",
    "single_frac_sum_asymptote",
    "sphere_area",
    "unit_ball_volume",
    "upper_bound_leading",
    "upper_const_b3",
    "weyl_const",
    "windowed_plane_wave",
]

__version__ = "0.1.0"
