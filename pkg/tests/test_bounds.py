import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fraceig as fe
from fraceig import bounds


DEFAULT = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=0.0)
DOM = fe.FormulaDomain(N=1, volume=2.0)


class TestWeylConst:
    def test_plugin_values(self):
        # a(1, 1/2) = 2 pi / |B_1| = pi
        assert bounds.weyl_const(1, 0.5) == pytest.approx(math.pi, rel=1e-13)
        # a(2, 1/2) = 2 pi / sqrt(pi) = 2 sqrt(pi)
        assert bounds.weyl_const(2, 0.5) == pytest.approx(
            2.0 * math.sqrt(math.pi), rel=1e-13
        )

    def test_sum_asymptote_factor(self):
        # sum-law constant is exactly N/(N+2s) times the pointwise one
        for N, s in [(1, 0.25), (2, 0.6), (3, 0.4)]:
            dom = fe.FormulaDomain(N=N, volume=2.0)
            point = bounds.weyl_const(N, s) * dom.volume ** (-2.0 * s / N)
            assert bounds.single_frac_sum_asymptote(N, s, dom, 1) == pytest.approx(
                N / (N + 2.0 * s) * point, rel=1e-14
            )

    def test_half_order_sum_constant(self):
        # N=1, s=1/2, |Omega|=2: (1/2) * pi * (1/2) = pi/4
        dom = fe.FormulaDomain(N=1, volume=2.0)
        assert bounds.single_frac_sum_asymptote(1, 0.5, dom, 1) == pytest.approx(
            math.pi / 4.0, rel=1e-13
        )


class TestAuxiliaryConstants:
    def test_fundamental_solution_const_mpmath(self):
        for N, s2 in [(1, 0.2), (2, 0.3), (3, 0.45)]:
            want = float(
                mpmath.mpf(2) ** (-2 * s2)
                * mpmath.pi ** (-mpmath.mpf(N) / 2)
                * mpmath.gamma((N - 2 * s2) / 2)
                / mpmath.gamma(s2 + 1)
                * s2
            )
            assert bounds.fundamental_solution_const(N, s2) == pytest.approx(
                want, rel=1e-12
            )

    def test_fundamental_solution_requires_subcritical(self):
        with pytest.raises(fe.PreconditionError):
            bounds.fundamental_solution_const(1, 0.6)

    def test_rearrangement_const_mpmath(self):
        for N, s2 in [(1, 0.2), (2, 0.3)]:
            omega = fe.sphere_area(N)
            want = float(
                mpmath.mpf(N) ** (2 * s2 / N)
                * mpmath.mpf(omega) ** (1 - 2 * s2 / N)
                / (2 * s2)
            )
            assert bounds.rearrangement_const(N, s2) == pytest.approx(want, rel=1e-12)


class TestB1TwoRoutes:
    def test_agreement_on_grid(self):
        # the display bracket and the proof-route bracket are the same number
        for N in (1, 2, 3, 4, 5):
            for s1 in np.linspace(0.15, 0.45, 5):
                for s2 in np.linspace(0.02, 0.95, 5) * s1:
                    p = fe.ProblemParams(N=N, s1=float(s1), s2=float(s2))
                    c = bounds.bly_constants(p)
                    assert c.b1 == pytest.approx(c.b1_proof_route, rel=1e-10)

    def test_s2_to_zero_limit(self):
        # b1 degenerates to the single-operator sum-law constant as s2 -> 0;
        # the gap is O(s2) with an (N, s1)-dependent slope
        for N, s1, budget in [(1, 0.4, 1e-6), (2, 0.7, 1e-5), (3, 0.9, 2e-5)]:
            p = fe.ProblemParams(N=N, s1=s1, s2=1e-6)
            c = bounds.bly_constants(p)
            limit = N / (N + 2.0 * s1) * bounds.weyl_const(N, s1)
            assert abs(c.b1 - limit) < budget
            finer = bounds.bly_constants(fe.ProblemParams(N=N, s1=s1, s2=1e-8))
            assert abs(finer.b1 - limit) < abs(c.b1 - limit) / 50.0


class TestB3:
    def test_matches_single_operator_constant(self):
        # b3 equals the single-operator sum-law constant at order s1 - s2
        for N, s1, s2 in [(1, 0.4, 0.2), (2, 0.7, 0.3), (3, 0.9, 0.25)]:
            s = s1 - s2
            want = N / (N + 2.0 * s) * bounds.weyl_const(N, s)
            assert bounds.upper_const_b3(N, s1, s2) == pytest.approx(want, rel=1e-10)

    def test_upper_leading_requires_hypothesis(self):
        p = fe.ProblemParams(N=2, s1=0.9, s2=0.2)
        with pytest.raises(fe.PreconditionError):
            bounds.upper_bound_leading(p, fe.FormulaDomain(N=2, volume=1.0), 3)

    def test_volume_power_law(self):
        # scaling (-1,1) to (-2,2) multiplies the leading term by 4^{-(s1-s2)}
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2)
        small = bounds.upper_bound_leading(p, fe.FormulaDomain(N=1, volume=2.0), 7)
        big = bounds.upper_bound_leading(p, fe.FormulaDomain(N=1, volume=4.0), 7)
        assert big / small == pytest.approx(4.0 ** -(p.s1 - p.s2), rel=1e-13)


class TestLowerBoundCurves:
    def test_k1_mu0_is_b1_times_volume_power(self):
        c = bounds.bly_constants(DEFAULT)
        want = c.b1 * 2.0 ** (-2.0 * (0.4 - 0.2) / 1.0)
        assert bounds.lower_bound_sum(DEFAULT, DOM, 1) == pytest.approx(want, rel=1e-14)
        assert bounds.lower_bound_single(DEFAULT, DOM, 1) == pytest.approx(
            want, rel=1e-14
        )

    def test_sum_vs_single_exponent_relation(self):
        # sum curve = single curve times k at every k
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=1.0)
        for k in (1, 3, 10):
            assert bounds.lower_bound_sum(p, DOM, k) == pytest.approx(
                k * bounds.lower_bound_single(p, DOM, k), rel=1e-13
            )

    def test_vacuous_for_large_mu(self):
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=1e6)
        assert bounds.lower_bound_sum(p, DOM, 1) < 0.0

    def test_preconditions(self):
        with pytest.raises(fe.PreconditionError):
            bounds.lower_bound_sum(
                fe.ProblemParams(N=1, s1=0.6, s2=0.2), DOM, 1
            )
        with pytest.raises(fe.PreconditionError):
            bounds.lower_bound_sum(DEFAULT, DOM, 0)
        with pytest.raises(fe.PreconditionError):
            bounds.lower_bound_sum(
                fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=-1.0), DOM, 1
            )


class TestMomentMajorant:
    def test_extremal_radius_and_value(self):
        # M1 = 1, M2 = 2, N = 1, s1 = 0.4: R^{1.8} = 1.8 * 2 / 2 -> R = 1.8^{1/1.8}
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=0.0)
        R, rhs = bounds.prop21_rhs(p, 1.0, 2.0)
        assert R == pytest.approx(1.8 ** (1.0 / 1.8), rel=1e-13)
        want = 2.0 * R**1.4 / 1.4
        assert rhs == pytest.approx(want, rel=1e-13)

    def test_mu_term(self):
        p0 = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=0.0)
        p1 = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=1.0)
        R, rhs0 = bounds.prop21_rhs(p0, 1.0, 2.0)
        _, rhs1 = bounds.prop21_rhs(p1, 1.0, 2.0)
        assert rhs1 == pytest.approx(rhs0 * (1.0 + 1.4 * R**-0.4), rel=1e-13)

    def test_extremal_profile_attains_equality_at_mu0(self):
        # quadrature of the bang-bang profile against the closed form
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=0.0)
        R, rhs = bounds.prop21_rhs(p, 1.0, 2.0)
        lhs = float(mpmath.quad(lambda z: 2 * abs(z) ** 0.4, [0, R]))
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_random_profiles_satisfy_inequality(self):
        rng = np.random.default_rng(3)
        for mu in (0.0, 1.0):
            p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=mu)
            for _ in range(50):
                M1 = rng.uniform(0.5, 2.0)
                M2 = rng.uniform(0.5, 5.0)
                R, rhs = bounds.prop21_rhs(p, M1, M2)
                edges = np.linspace(0.0, 3.0 * R, 33)
                vals = rng.uniform(0.0, M1, size=32)
                mom = 2.0 * (edges[1:] ** 1.8 - edges[:-1] ** 1.8) / 1.8
                m = float(vals @ mom)
                if m > 0.0:
                    vals *= min(rng.uniform(0.0, 1.0) * M2 / m, 1.0)
                lhs = float(
                    vals @ (2.0 * (edges[1:] ** 1.4 - edges[:-1] ** 1.4) / 1.4)
                ) + mu * float(vals @ (2.0 * (edges[1:] - edges[:-1])))
                assert lhs <= rhs + 1e-12

    def test_rejects_nonpositive_caps(self):
        with pytest.raises(fe.PreconditionError):
            bounds.prop21_rhs(DEFAULT, 0.0, 1.0)


class TestBracketedRoot:
    def test_anchor_at_two(self):
        res = bounds.lemma21_solve(0.5, 0.25, 2.0)
        assert abs(res.root - 1.0) <= 1e-9

    def test_anchor_at_sixteen(self):
        y = 0.5 * (-1.0 + math.sqrt(65.0))
        res = bounds.lemma21_solve(0.5, 0.25, 16.0)
        assert res.root == pytest.approx(y**4, rel=1e-9)

    def test_anchor_mpmath(self):
        # independent high-precision root for an asymmetric parameter triple
        tau1, tau2, d1 = 0.8, 0.3, 10.0
        ref = float(
            mpmath.findroot(
                lambda r: r**tau1 * (1 + r**-tau2) - d1, mpmath.mpf(10.0)
            )
        )
        res = bounds.lemma21_solve(tau1, tau2, d1)
        assert res.root == pytest.approx(ref, rel=1e-11)

    @given(
        st.floats(min_value=0.05, max_value=0.95),
        st.floats(min_value=0.02, max_value=0.98),
        st.floats(min_value=-1.0, max_value=3.0),
    )
    @settings(deadline=None, max_examples=150)
    def test_bracket_property(self, tau1, frac, logd):
        tau2 = tau1 * frac
        d1 = 10.0**logd
        res = bounds.lemma21_solve(tau1, tau2, d1)
        assert res.lower < res.root < res.upper
        f_val = res.root**tau1 * (1.0 + res.root**-tau2)
        assert abs(f_val - d1) / d1 <= 1e-9

    def test_rejects_bad_exponents(self):
        with pytest.raises(fe.PreconditionError):
            bounds.lemma21_solve(0.25, 0.5, 2.0)
        with pytest.raises(fe.PreconditionError):
            bounds.lemma21_solve(1.2, 0.5, 2.0)
        with pytest.raises(fe.PreconditionError):
            bounds.lemma21_solve(0.5, 0.25, -1.0)
