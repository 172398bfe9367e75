"""Experiment orchestration: builds discrete problems from a configuration,
runs the verification suites, and emits CSV/JSON reports.

Gating suites (spectrum, lower, sweep-mu, lemmas) return ok=False on any
violated inequality; diagnostics (upper, weyl) report ratios and fits but
never gate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import bounds
from .core import (
    DefinitenessError,
    Domain1D,
    PreconditionError,
    ProblemParams,
    Spectrum,
    SymmetricMatrix,
)
from .eigen import GenEigProblem
from .fracop import QuadratureSpec, assemble_mass, assemble_stiffness

_SUITES = ("constants", "spectrum", "lower", "upper", "sweep-mu", "lemmas", "weyl")

# lambda_1 of the single-operator problem at s = 0.25 on (-1, 1), Richardson
# extrapolation of the n = 256/512/1024 Galerkin values (observed rate ~ 1)
SINGLE_S025_LAMBDA1_REF = 0.970162577023

_RNG_NAME = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved inputs of one experiment run."""

    params: ProblemParams
    dom: Domain1D
    k_max: int
    suite: str
    mu_list: tuple[float, ...] = ()
    seeds: int = 0
    output_dir: Path | None = None
    single_s: float | None = None
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.suite not in _SUITES:
            raise PreconditionError(f"unknown suite {self.suite!r}; one of {_SUITES}")
        if not (1 <= self.k_max <= self.dom.n):
            raise PreconditionError(
                f"k_max must lie in [1, n_grid={self.dom.n}], got {self.k_max}"
            )

    @property
    def n_grid(self) -> int:
        return self.dom.n

    def resolved(self) -> dict:
        """Full configuration and tolerances, embedded in every report."""
        return {
            "N": self.params.N,
            "s1": self.params.s1,
            "s2": self.params.s2,
            "mu": self.params.mu,
            "a": self.dom.a,
            "b": self.dom.b,
            "n_grid": self.dom.n,
            "k_max": self.k_max,
            "suite": self.suite,
            "mu_list": list(self.mu_list),
            "seed": self.seeds,
            "single_s": self.single_s,
            "rng": _RNG_NAME,
            "per_entry_rel_tol": self.quad.per_entry_rel_tol,
            "gauss_order": self.quad.gauss_order,
        }


class BoundRow(NamedTuple):
    kind: str  # "sum" or "single"
    k: int
    computed: float
    bound_value: float
    margin: float
    vacuous: bool
    passed: bool


@dataclass
class BoundReport:
    rows: list[BoundRow]
    metadata: dict

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)


# -- matrix construction -------------------------------------------------------


def _pencil(cfg: ExperimentConfig, mu: float):
    """A_{s1} and B = A_{s2} + mu M for the configured grid."""
    p, dom = cfg.params, cfg.dom
    A1 = assemble_stiffness(dom, p.s1, cfg.quad)
    A2 = assemble_stiffness(dom, p.s2, cfg.quad)
    M = assemble_mass(dom)
    B = SymmetricMatrix(
        order=dom.n, entries=A2.entries + mu * M.entries, label=f"E_s{p.s2:g}+mu*M"
    )
    return A1, A2, M, B


def _lowest_single_eig(A: SymmetricMatrix, M: SymmetricMatrix) -> float:
    return float(GenEigProblem(A=A, B=M).solve(k=1).eigenvalues[0])


def _structural_checks(spec: Spectrum, B: SymmetricMatrix) -> dict:
    X = spec.eigenvectors
    gram = X.T @ (B.entries @ X)
    resid = float(np.max(np.abs(gram - np.eye(X.shape[1]))))
    lam = spec.eigenvalues
    return {
        "all_positive": bool(np.all(lam > 0.0)),
        "ascending": bool(np.all(np.diff(lam) >= -1e-14 * max(1.0, lam[-1]))),
        "orthonormality_residual": resid,
        "orthonormality_ok": resid <= 1e-8,
    }


# -- suites --------------------------------------------------------------------


def run_spectrum(cfg: ExperimentConfig):
    """Solve the configured eigenproblem and run the structural checks.

    In single-operator mode (single_s set) solves A_s x = lambda M x and
    compares lambda_1 against the stored fine-grid reference when s = 0.25
    on (-1, 1).
    """
    if cfg.single_s is not None:
        s = cfg.single_s
        A = assemble_stiffness(cfg.dom, s, cfg.quad)
        M = assemble_mass(cfg.dom)
        spec = GenEigProblem(A=A, B=M).solve(k=cfg.k_max)
        checks = _structural_checks(spec, M)
        report = {
            "mode": "single",
            "s": s,
            "config": cfg.resolved(),
            "checks": checks,
        }
        if (
            abs(s - 0.25) < 1e-12
            and (cfg.dom.a, cfg.dom.b) == (-1.0, 1.0)
            and cfg.dom.n >= 256
        ):
            lam1 = float(spec.eigenvalues[0])
            rel = abs(lam1 - SINGLE_S025_LAMBDA1_REF) / SINGLE_S025_LAMBDA1_REF
            report["reference_check"] = {
                "lambda1": lam1,
                "reference": SINGLE_S025_LAMBDA1_REF,
                "rel_error": rel,
                "ok": rel <= 0.01,
            }
            checks_ok = all(
                v for k, v in checks.items() if isinstance(v, bool)
            ) and report["reference_check"]["ok"]
        else:
            checks_ok = all(v for k, v in checks.items() if isinstance(v, bool))
        report["ok"] = checks_ok
        return spec, report

    mu = cfg.params.mu
    A1, A2, M, B = _pencil(cfg, mu)
    lam_s2_1 = _lowest_single_eig(A2, M)
    if mu <= -lam_s2_1:
        raise PreconditionError(
            f"mu = {mu} must exceed -lambda_hat(s2,1) = {-lam_s2_1:.6e}"
        )
    try:
        spec = GenEigProblem(A=A1, B=B).solve(k=cfg.k_max)
    except DefinitenessError as err:
        err.lambda_s2_1 = lam_s2_1
        raise
    checks = _structural_checks(spec, B)
    report = {
        "mode": "mixed",
        "config": cfg.resolved(),
        "lambda_s2_1": lam_s2_1,
        "lambda_s2_1_note": (
            "discrete overestimate of the continuum value; the admissible "
            "mu range reported here is slightly conservative"
        ),
        "checks": checks,
        "ok": all(v for v in checks.values() if isinstance(v, bool)),
    }
    return spec, report


def verify_lower(cfg: ExperimentConfig) -> BoundReport:
    """Check the closed-form lower bounds against the Galerkin spectrum.

    Galerkin eigenvalues overestimate the true ones, so every row must pass;
    a failure falsifies the implementation, not the inequality.
    """
    cfg.params.require_nonnegative_mu()
    cfg.params.require_subcritical()
    spec, spec_report = run_spectrum(cfg)
    lam = spec.eigenvalues[: cfg.k_max]
    fdom = cfg.dom.as_formula_domain()
    rows = []
    running = 0.0
    for k in range(1, cfg.k_max + 1):
        running += float(lam[k - 1])
        bv = bounds.lower_bound_sum(cfg.params, fdom, k)
        vac = bv < 0.0
        rows.append(
            BoundRow("sum", k, running, bv, running - bv, vac, vac or running >= bv)
        )
        bs = bounds.lower_bound_single(cfg.params, fdom, k)
        lk = float(lam[k - 1])
        vs = bs < 0.0
        rows.append(BoundRow("single", k, lk, bs, lk - bs, vs, vs or lk >= bs))
    meta = {
        "config": cfg.resolved(),
        "constants": bounds.bly_constants(cfg.params).__dict__,
        "structural": spec_report["checks"],
    }
    return BoundReport(rows=rows, metadata=meta)


def verify_upper(cfg: ExperimentConfig) -> dict:
    """Diagnostic comparison of eigenvalue sums with the leading-order upper
    bound term.

    Reports the ratio S(k)/leading(k) and a least-squares exponent fit of
    log S versus log k over the upper half of the k range.  Non-gating: the
    full bound's constants c0 and delta3 are existential, and the Galerkin
    values overestimate, so only the asymptotic shape is checkable.
    """
    if cfg.params.mu != 0.0:
        raise PreconditionError(f"the upper-bound diagnostic needs mu = 0, got {cfg.params.mu}")
    p = cfg.params
    if not (p.s1 < 0.5 * (1.0 + p.s2)):
        raise PreconditionError(
            f"need s1 < (1 + s2)/2, got s1={p.s1}, s2={p.s2}"
        )
    spec, _ = run_spectrum(cfg)
    lam = spec.eigenvalues[: cfg.k_max]
    fdom = cfg.dom.as_formula_domain()
    ks = np.arange(1, cfg.k_max + 1)
    sums = np.cumsum(lam)
    leading = np.array([bounds.upper_bound_leading(p, fdom, int(k)) for k in ks])
    ratio = sums / leading
    half = ks >= max(2, cfg.k_max // 2)
    slope, intercept = np.polyfit(np.log(ks[half]), np.log(sums[half]), 1)
    expected = 1.0 + 2.0 * (p.s1 - p.s2) / p.N
    top = ratio[half]
    return {
        "config": cfg.resolved(),
        "k": ks.tolist(),
        "sum_computed": sums.tolist(),
        "leading_term": leading.tolist(),
        "ratio": ratio.tolist(),
        "exponent_fit": float(slope),
        "exponent_expected": expected,
        "exponent_ok": abs(slope - expected) <= 0.1,
        "ratio_trend_decreasing": bool(top[-1] < top[0]),
        "gating": False,
        "note": (
            "diagnostic only: the full upper bound contains existential "
            "constants and cannot be checked as a hard inequality"
        ),
    }


def sweep_mu(cfg: ExperimentConfig) -> dict:
    """lambda_1(mu) along an ascending mu list: must be strictly decreasing."""
    A1, A2, M, _ = _pencil(cfg, 0.0)
    lam_s2_1 = _lowest_single_eig(A2, M)
    mus = list(cfg.mu_list)
    if not mus:
        mus = [-0.9 * lam_s2_1, -0.5 * lam_s2_1, 0.0, 1.0, 10.0]
    if any(m2 < m1 for m1, m2 in zip(mus, mus[1:])):
        raise PreconditionError(f"mu list must be ascending, got {mus}")
    if mus[0] <= -lam_s2_1:
        raise PreconditionError(
            f"every mu must exceed -lambda_hat(s2,1) = {-lam_s2_1:.6e}; got {mus[0]}"
        )
    lam1 = []
    for mu in mus:
        B = SymmetricMatrix(
            order=cfg.dom.n, entries=A2.entries + mu * M.entries, label="B"
        )
        lam1.append(float(GenEigProblem(A=A1, B=B).solve(k=1).eigenvalues[0]))
    strict = all(
        (b == a) if mb == ma else (b < a)
        for (a, ma), (b, mb) in zip(zip(lam1, mus), zip(lam1[1:], mus[1:]))
    )
    return {
        "config": cfg.resolved(),
        "lambda_s2_1": lam_s2_1,
        "lambda_s2_1_note": (
            "discrete overestimate; admissible mu range is conservative"
        ),
        "mu": mus,
        "lambda1": lam1,
        "strictly_decreasing": strict,
        "left_endpoint_value": lam1[0],
        "ok": strict,
    }


# -- lemma property suites -----------------------------------------------------


def _prop21_trials(params: ProblemParams, rng, trials: int) -> dict:
    """Random admissible radial profiles against the closed-form majorant.

    Profiles are piecewise constant on 32 shells over [0, 3R], values uniform
    in [0, M1], rescaled so the constraint moment binds at a uniform random
    fraction of M2 (never scaled above the pointwise cap).
    """
    from .core import sphere_area

    N, s1, s2, mu = params.N, params.s1, params.s2, params.mu
    omega = sphere_area(N)
    t1, t2 = 2.0 * s1 + N, 2.0 * s2 + N
    worst = math.inf
    failures = 0
    for _ in range(trials):
        M1 = rng.uniform(0.5, 2.0)
        M2 = rng.uniform(0.5, 5.0)
        R, rhs = bounds.prop21_rhs(params, M1, M2)
        edges = np.linspace(0.0, 3.0 * R, 33)
        vals = rng.uniform(0.0, M1, size=32)
        mom_w = omega * (edges[1:] ** t1 - edges[:-1] ** t1) / t1
        moment = float(vals @ mom_w)
        if moment > 0.0:
            vals *= min(rng.uniform(0.0, 1.0) * M2 / moment, 1.0)
        lhs_w = omega * (edges[1:] ** t2 - edges[:-1] ** t2) / t2
        mass_w = omega * (edges[1:] ** N - edges[:-1] ** N) / N
        lhs = float(vals @ lhs_w) + mu * float(vals @ mass_w)
        margin = rhs - lhs
        worst = min(worst, margin)
        if margin < 0.0:
            failures += 1
    # extremal equality at mu = 0: f = M1 on the ball of radius R
    p0 = ProblemParams(N=N, s1=s1, s2=s2, mu=0.0)
    R, rhs0 = bounds.prop21_rhs(p0, 1.0, 2.0)
    lhs0 = omega * 1.0 * R**t2 / t2
    eq_gap = abs(lhs0 - rhs0)
    return {
        "trials": trials,
        "failures": failures,
        "worst_margin": worst,
        "equality_gap_mu0": eq_gap,
        "ok": failures == 0 and eq_gap <= 1e-8,
    }


def _lemma21_trials(rng, trials: int) -> dict:
    """Random bracketed-root checks plus the two analytic anchors."""
    failures = 0
    worst_resid = 0.0
    for _ in range(trials):
        tau1 = rng.uniform(0.05, 0.95)
        tau2 = rng.uniform(0.01, 0.99) * tau1
        d1 = 10.0 ** rng.uniform(-1.0, 3.0)
        res = bounds.lemma21_solve(tau1, tau2, d1)
        f_val = res.root**tau1 * (1.0 + res.root ** (-tau2))
        resid = abs(f_val - d1) / d1
        worst_resid = max(worst_resid, resid)
        if not (res.lower < res.root < res.upper) or resid > 1e-9:
            failures += 1
    anchor1 = bounds.lemma21_solve(0.5, 0.25, 2.0)
    y = 0.5 * (-1.0 + math.sqrt(65.0))
    anchor2 = bounds.lemma21_solve(0.5, 0.25, 16.0)
    a1_err = abs(anchor1.root - 1.0)
    a2_err = abs(anchor2.root - y**4) / y**4
    return {
        "trials": trials,
        "failures": failures,
        "worst_rel_residual": worst_resid,
        "anchor_root_at_2": anchor1.root,
        "anchor_root_at_16": anchor2.root,
        "anchor_errors": [a1_err, a2_err],
        "ok": failures == 0 and a1_err <= 1e-9 and a2_err <= 1e-9,
    }


def _bessel_trials(cfg: ExperimentConfig, rng, vectors: int = 50) -> dict:
    """Partial B-orthonormal expansions never exceed the B-norm."""
    sub = ExperimentConfig(
        params=cfg.params,
        dom=Domain1D(cfg.dom.a, cfg.dom.b, min(cfg.dom.n, 128)),
        k_max=min(cfg.k_max, 20),
        suite="spectrum",
        seeds=cfg.seeds,
        quad=cfg.quad,
    )
    spec, _ = run_spectrum(sub)
    _, A2, M, B = _pencil(sub, sub.params.mu)
    X = spec.eigenvectors
    worst = math.inf
    failures = 0
    for _ in range(vectors):
        x = rng.standard_normal(sub.dom.n)
        coeffs = X.T @ (B.entries @ x)
        partial = float(coeffs @ coeffs)
        norm2 = float(x @ (B.entries @ x))
        margin = norm2 - partial
        worst = min(worst, margin)
        if margin < -1e-10 * norm2:
            failures += 1
    return {"vectors": vectors, "failures": failures, "worst_margin": worst,
            "ok": failures == 0}


def verify_lemmas(cfg: ExperimentConfig) -> dict:
    """Property suites for the auxiliary inequalities, one block per lemma."""
    rng = np.random.default_rng(cfg.seeds)
    blocks = {}
    for mu in (0.0, 1.0):
        p = ProblemParams(N=cfg.params.N, s1=cfg.params.s1, s2=cfg.params.s2, mu=mu)
        blocks[f"moment_majorant_mu{mu:g}"] = _prop21_trials(p, rng, 100)
    blocks["bracketed_root"] = _lemma21_trials(rng, 100)
    blocks["bessel"] = _bessel_trials(cfg, rng)
    ok = all(b["ok"] for b in blocks.values())
    return {"config": cfg.resolved(), "blocks": blocks, "ok": ok}


def run_weyl_diagnostic(cfg: ExperimentConfig) -> dict:
    """Single-operator spectral asymptotics versus the closed-form constants.

    Diagnostic with a 30% tolerance at moderate k: discretization error and
    preasymptotic effects dominate there.
    """
    if cfg.single_s is None:
        raise PreconditionError("the weyl diagnostic requires single-operator mode (--single)")
    s = cfg.single_s
    A = assemble_stiffness(cfg.dom, s, cfg.quad)
    M = assemble_mass(cfg.dom)
    lam = GenEigProblem(A=A, B=M).solve(k=cfg.k_max).eigenvalues
    fdom = cfg.dom.as_formula_domain()
    N = cfg.params.N
    a_const = bounds.weyl_const(N, s) * fdom.volume ** (-2.0 * s / N)
    sum_const = N / (N + 2.0 * s) * a_const
    ks = np.arange(1, cfg.k_max + 1)
    point_ratio = lam / (a_const * ks ** (2.0 * s / N))
    sum_ratio = np.cumsum(lam) / (sum_const * ks ** (1.0 + 2.0 * s / N))
    k_top = cfg.k_max
    return {
        "config": cfg.resolved(),
        "s": s,
        "pointwise_constant": a_const,
        "sum_constant": sum_const,
        "k": ks.tolist(),
        "pointwise_ratio": point_ratio.tolist(),
        "sum_ratio": sum_ratio.tolist(),
        "sum_ratio_at_kmax": float(sum_ratio[-1]),
        "within_30pct": bool(0.7 <= sum_ratio[-1] <= 1.3),
        "gating": False,
    }


# -- report writing -------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_summary(out_dir: Path, summary: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True, default=float) + "\n"
    )


def write_bound_report(out_dir: Path, report: BoundReport, name: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / f"{name}.csv",
        ["kind", "k", "computed", "bound_value", "margin", "vacuous", "pass"],
        [
            (r.kind, r.k, r.computed, r.bound_value, r.margin,
             int(r.vacuous), int(r.passed))
            for r in report.rows
        ],
    )


def write_spectrum_csv(out_dir: Path, spec: Spectrum) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / "eigenvalues.csv",
        ["j", "lambda"],
        [(j + 1, float(v)) for j, v in enumerate(spec.eigenvalues)],
    )
