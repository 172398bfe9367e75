import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fraceig as fe
from fraceig.core import DomainError


class TestGamma:
    def test_anchors(self):
        assert fe.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
        assert fe.gamma(1.0) == pytest.approx(1.0, rel=1e-13)
        assert fe.gamma(2.0) == pytest.approx(1.0, rel=1e-13)
        assert fe.gamma(5.0) == pytest.approx(24.0, rel=1e-13)
        assert fe.gamma(7.5) == pytest.approx(1871.254305797788, rel=1e-12)

    def test_recurrence_many_points(self):
        rng = np.random.default_rng(7)
        xs = rng.uniform(0.1, 30.0, size=1000)
        for x in xs:
            assert fe.gamma(x + 1.0) == pytest.approx(x * fe.gamma(x), rel=1e-12)

    @given(st.floats(min_value=0.1, max_value=30.0))
    @settings(deadline=None, max_examples=80)
    def test_recurrence_property(self, x):
        assert fe.gamma(x + 1.0) == pytest.approx(x * fe.gamma(x), rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_out_of_domain(self, bad):
        with pytest.raises(DomainError):
            fe.gamma(bad)


class TestGeometryConstants:
    def test_sphere_area(self):
        assert fe.sphere_area(1) == pytest.approx(2.0, rel=1e-14)
        assert fe.sphere_area(2) == pytest.approx(2.0 * math.pi, rel=1e-13)
        assert fe.sphere_area(3) == pytest.approx(4.0 * math.pi, rel=1e-13)

    def test_ball_volume(self):
        assert fe.unit_ball_volume(1) == pytest.approx(2.0, rel=1e-14)
        assert fe.unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-13)
        assert fe.unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-13)

    def test_dimension_validation(self):
        for bad in (0, -1, 1.5):
            with pytest.raises(DomainError):
                fe.sphere_area(bad)
            with pytest.raises(DomainError):
                fe.unit_ball_volume(bad)


class TestFracNormConst:
    def test_half_order_in_1d(self):
        # c(1, 1/2) = 2 pi^{-1/2} (1/2) Gamma(1) / Gamma(1/2) = 1/pi
        assert fe.frac_norm_const(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-13)

    def test_against_mpmath_formula(self):
        import mpmath

        for N, s in [(1, 0.25), (2, 0.3), (3, 0.8)]:
            want = float(
                mpmath.mpf(2) ** (2 * s)
                * mpmath.pi ** (-mpmath.mpf(N) / 2)
                * s
                * mpmath.gamma((N + 2 * s) / 2)
                / mpmath.gamma(1 - s)
            )
            assert fe.frac_norm_const(N, s) == pytest.approx(want, rel=1e-12)

    def test_order_validation(self):
        for bad in (0.0, 1.0, -0.3, 1.7):
            with pytest.raises(DomainError):
                fe.frac_norm_const(1, bad)


class TestProblemParams:
    def test_valid(self):
        p = fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=1.0)
        p.require_subcritical()
        p.require_nonnegative_mu()

    @given(
        st.integers(min_value=-3, max_value=3),
        st.floats(min_value=-0.5, max_value=1.5),
        st.floats(min_value=-0.5, max_value=1.5),
    )
    @settings(deadline=None, max_examples=200)
    def test_rejects_invalid_tuples(self, N, s1, s2):
        valid = N >= 1 and 0.0 < s2 < s1 < 1.0
        if valid:
            fe.ProblemParams(N=N, s1=s1, s2=s2)
        else:
            with pytest.raises(DomainError):
                fe.ProblemParams(N=N, s1=s1, s2=s2)

    def test_subcritical_check(self):
        with pytest.raises(fe.PreconditionError):
            fe.ProblemParams(N=1, s1=0.6, s2=0.2).require_subcritical()

    def test_mu_sign_check(self):
        with pytest.raises(fe.PreconditionError):
            fe.ProblemParams(N=1, s1=0.4, s2=0.2, mu=-0.1).require_nonnegative_mu()


class TestDomain1D:
    def test_grid_geometry(self):
        dom = fe.Domain1D(-1.0, 1.0, 3)
        assert dom.h == pytest.approx(0.5)
        assert dom.volume == pytest.approx(2.0)
        assert np.allclose(dom.nodes(), [-0.5, 0.0, 0.5])

    def test_rejects_bad_intervals(self):
        with pytest.raises(DomainError):
            fe.Domain1D(1.0, -1.0, 4)
        with pytest.raises(DomainError):
            fe.Domain1D(0.0, 1.0, 0)

    def test_formula_domain(self):
        fd = fe.Domain1D(-2.0, 2.0, 4).as_formula_domain()
        assert fd.N == 1 and fd.volume == pytest.approx(4.0)
        with pytest.raises(DomainError):
            fe.FormulaDomain(N=1, volume=-1.0)


class TestSymmetricMatrix:
    def test_rejects_asymmetry(self):
        bad = np.array([[1.0, 2.0], [2.0 + 1e-18, 1.0]])
        bad[1, 0] = 2.0000001
        with pytest.raises(DomainError):
            fe.SymmetricMatrix(order=2, entries=bad, label="x")

    def test_entries_read_only(self):
        m = fe.SymmetricMatrix(order=2, entries=np.eye(2), label="id")
        with pytest.raises(ValueError):
            m.entries[0, 0] = 5.0

    def test_csv_header_and_digits(self, tmp_path):
        m = fe.SymmetricMatrix(
            order=2, entries=np.array([[1 / 3, 0.0], [0.0, 1 / 3]]), label="E", s=0.4
        )
        path = tmp_path / "m.csv"
        m.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "2,0.40000000000000002,E"
        value = lines[1].split(",")[0]
        assert float(value) == 1 / 3
        assert len(value.split("e")[0].replace(".", "").replace("-", "")) >= 17


class TestSpectrum:
    def test_rejects_descending(self):
        with pytest.raises(DomainError):
            fe.Spectrum(
                eigenvalues=np.array([2.0, 1.0]),
                eigenvectors=np.eye(2),
                b_label="B",
            )

    def test_shape_consistency(self):
        with pytest.raises(DomainError):
            fe.Spectrum(
                eigenvalues=np.array([1.0, 2.0]),
                eigenvectors=np.eye(3),
                b_label="B",
            )
