import numpy as np
import pytest
from scipy import integrate

from app.aee import (
    GOLDEN_ORDERS,
    SolverOptions,
    action_series,
    build_coefficients,
    contour_integral,
    golden_validate,
    golden_value,
    j_eval,
    quantization_levels,
    solve_quantization,
)
from app.models.potential import PotentialSpec
from app.models.series import BranchContour
from app.utils.errors import ContourError, DomainError, UnsupportedSpecError

H_TABLE1 = PotentialSpec.non_hermitian(1.0, 6.0)
h_TABLE1 = PotentialSpec.hermitian(4.0, 10.0)
H_TABLE2 = PotentialSpec.non_hermitian(1.0, -0.5)
h_TABLE2 = PotentialSpec.hermitian(4.0, 2j)

# energy-expansion column, rows n = 0..10
E_J_TABLE1 = [1.5186675, 4.5046982, 10.931992, 17.793016, 25.238134, 33.213972,
              41.666150, 50.549804, 59.828459, 69.472110, 79.455685]
E_J_TABLE2 = [2.4545618, 6.0884046, 11.866200, 18.510890, 25.836220, 33.733314,
              42.128814, 50.969275, 60.213680, 69.829368, 79.789590]


def _cauchy_derivative(f, y, radius=0.05, points=64):
    """f'(y) from the mean of f on a small circle around y."""
    phase = np.exp(2j * np.pi * np.arange(points) / points)
    return complex((f(y + radius * phase) / phase).mean() / radius)


class TestRecurrence:
    """Structure of the a_k coefficients."""

    def test_only_multiples_of_three_survive_without_linear_term(self):
        terms = build_coefficients(H_TABLE1, 12)
        for k, a_k in enumerate(terms):
            assert a_k.is_zero == (k % 3 != 0), k

    def test_m_equals_k_minus_one(self):
        terms = build_coefficients(H_TABLE1, 15)
        for k in range(0, 16, 3):
            assert terms[k].m_values == (k - 1,)

    def test_linear_term_adds_companion_part(self):
        terms = build_coefficients(h_TABLE1, 3)
        assert terms[3].m_values == (2, 1)

    def test_leading_term_is_root(self):
        y = np.array([0.2 + 0.1j])
        a0 = build_coefficients(H_TABLE1, 0)[0]
        np.testing.assert_allclose(a0(y), np.sqrt(1 + y ** 4))

    @pytest.mark.parametrize("spec", [H_TABLE1, h_TABLE1, H_TABLE2, h_TABLE2,
                                      PotentialSpec(-1.0, 4j, 0j, hbar=0.8)])
    @pytest.mark.parametrize("y", [0.3 + 0.2j, -0.45 + 0.1j])
    def test_pointwise_recurrence(self, spec, y):
        """a_k(y) against the recurrence with every product and derivative taken numerically."""
        K = 12
        terms = build_coefficients(spec, K)
        lam = spec.lam
        h_hat = (spec.hbar / 1j) * lam
        at = [complex(a(np.array([y]))[0]) for a in terms]
        for k in range(1, K + 1):
            bracket = y ** 2 * sum(at[i] * at[k - i] for i in range(1, k))
            if k >= 3:
                previous = terms[k - 3]
                bracket += h_hat * y ** 2 * _cauchy_derivative(lambda z: previous(z), y)
            if k == 3:
                bracket += spec.linear / lam * y ** 3
            if k == 6:
                bracket += spec.invsq * lam ** 2
            expected = -bracket / (2 * y ** 2 * at[0])
            assert at[k] == pytest.approx(expected, rel=1e-10, abs=1e-12), k

    def test_rejects_negative_order(self):
        with pytest.raises(DomainError):
            build_coefficients(H_TABLE1, -1)

    def test_inverse_square_with_positive_quartic_unsupported(self):
        with pytest.raises(UnsupportedSpecError):
            build_coefficients(PotentialSpec(1.0, 0j, 1.0), 6)


class TestActionSeries:
    def test_b3_is_minus_half_hbar(self):
        for spec in (H_TABLE1, h_TABLE1, PotentialSpec.non_hermitian(2.0, 1.0, hbar=0.7)):
            series = action_series(spec, 3)
            assert series[3] == pytest.approx(-spec.hbar / 2, abs=1e-12)

    def test_b0(self):
        """b_0 g^(1/4) = Gamma(1/4) / (3 sqrt(2 pi) Gamma(3/4))."""
        series = action_series(PotentialSpec.non_hermitian(3.0, 0.0), 0)
        assert series[0].real * 3.0 ** 0.25 == pytest.approx(0.39345, abs=5e-5)

    def test_vanishing_orders_are_exact_zeros(self):
        series = action_series(H_TABLE1, 24)
        assert series.nonzero() == [0, 3, 6, 12, 18, 24]

    def test_vanishing_orders_without_origin_pole(self):
        assert action_series(h_TABLE1, 24).nonzero() == [0, 3, 6, 12, 18, 24]

    def test_b6_vanishes_at_quarter_hbar_squared(self):
        series = action_series(PotentialSpec.non_hermitian(1.0, 0.25), 12)
        assert 6 not in series.nonzero()
        assert 12 in series.nonzero()

    def test_leading_integral_against_quad(self):
        """The ellipse collapses onto the cut [-1, 1], where sqrt(1 - y^4) changes sign."""
        a0 = build_coefficients(PotentialSpec(1.0), 0)[0]
        value = contour_integral(a0, BranchContour.default(1))
        along_cut, _ = integrate.quad(lambda y: np.sqrt(1 - y ** 4), -1.0, 1.0)
        assert abs(value) == pytest.approx(along_cut / np.pi, rel=1e-12)

    def test_contour_integral_stable_under_doubling(self):
        a6 = build_coefficients(H_TABLE1, 6)[6]
        coarse = contour_integral(a6, BranchContour.default(-1))
        fine = contour_integral(a6, BranchContour.default(-1, n_points=8192))
        assert abs(fine - coarse) <= 1e-12 * abs(fine)

    def test_contour_independence(self):
        default = action_series(H_TABLE1, 12, quadrature="ellipse")
        other = action_series(H_TABLE1, 12, BranchContour(1j / np.sqrt(2), (0.95, 0.5)), quadrature="ellipse")
        for k in default.nonzero():
            assert abs(default[k] - other[k]) <= 1e-11 * max(1.0, abs(default[k])), k

    def test_ray_signs_follow_the_contour(self):
        default = action_series(H_TABLE1, 24)
        other = action_series(H_TABLE1, 24, BranchContour(1j / np.sqrt(2), (0.95, 0.5)))
        assert default.nonzero() == other.nonzero()
        for k in default.nonzero():
            assert other[k] == pytest.approx(default[k], rel=1e-12), k

    @pytest.mark.parametrize("spec", [H_TABLE1, h_TABLE1, H_TABLE2, h_TABLE2])
    def test_rays_agree_with_ellipse(self, spec):
        rays = action_series(spec, 12)
        ellipse = action_series(spec, 12, quadrature="ellipse")
        assert rays.nonzero() == ellipse.nonzero()
        for k in rays.nonzero():
            assert rays[k] == pytest.approx(ellipse[k], rel=1e-9), k

    @pytest.mark.parametrize("spec", [H_TABLE1, h_TABLE1, H_TABLE2, h_TABLE2])
    def test_stable_under_doubling(self, spec):
        coarse = action_series(spec, 36)
        fine = action_series(spec, 36, BranchContour.default(spec.sigma, n_points=8192))
        assert coarse.nonzero() == fine.nonzero()
        for k in coarse.nonzero():
            assert fine[k] == pytest.approx(coarse[k], rel=1e-10), k

    @pytest.mark.parametrize("spec", [H_TABLE1, h_TABLE1, PotentialSpec.non_hermitian(1.0, 2.0)])
    def test_high_orders_real(self, spec):
        series = action_series(spec, 36)
        assert series.nonzero()[-1] == 36
        for k in series.nonzero():
            assert abs(series[k].imag) <= 1e-10 * abs(series[k]), k

    def test_error_estimates_bound_zeros(self):
        series = action_series(H_TABLE1, 24)
        assert np.all(series.errors >= 0)
        for k in series.nonzero():
            assert series.errors[k] < 1e-10 * abs(series[k]), k

    @pytest.mark.parametrize("c", [0.5, 0.8, 2.0])
    def test_hbar_scaling(self, c):
        """With a / hbar^2 fixed, b_3n scales as hbar^n."""
        base = action_series(PotentialSpec.non_hermitian(1.3, 0.7), 24)
        scaled = action_series(PotentialSpec.non_hermitian(1.3, 0.7 * c ** 2, hbar=c), 24)
        for k in (3, 6, 12, 18, 24):
            assert scaled[k] == pytest.approx(c ** (k // 3) * base[k], rel=1e-9), k

    def test_unknown_quadrature(self):
        with pytest.raises(DomainError):
            action_series(H_TABLE1, 6, quadrature="gauss")

    def test_contour_missing_branch_point_rejected(self):
        with pytest.raises(ContourError):
            action_series(H_TABLE1, 6, BranchContour(1j / np.sqrt(2), (0.5, 0.3)))

    def test_too_few_points_rejected(self):
        with pytest.raises(ContourError):
            action_series(H_TABLE1, 6, BranchContour.default(-1, n_points=64))


class TestClosedForms:
    @pytest.mark.parametrize("spec", [H_TABLE1, H_TABLE2])
    def test_low_orders_non_hermitian(self, spec):
        series = action_series(spec, 6)
        for k in (0, 3, 6):
            assert series[k] == pytest.approx(golden_value(spec, k), rel=1e-9)

    @pytest.mark.parametrize("spec", [h_TABLE1, h_TABLE2])
    def test_all_orders_hermitian(self, spec):
        report = golden_validate(spec)
        assert report.passed, report.entries
        assert report.max_deviation <= 1e-9

    def test_random_parameters(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            g, a, hbar = rng.uniform(0.5, 2.0), rng.uniform(-2.0, 8.0), rng.uniform(0.5, 1.5)
            spec = PotentialSpec.non_hermitian(g, a, hbar)
            series = action_series(spec, 6)
            for k in (0, 3, 6):
                assert series[k] == pytest.approx(golden_value(spec, k), rel=1e-9, abs=1e-12)

            partner = PotentialSpec.hermitian(4 * g, rng.uniform(-5.0, 5.0), hbar)
            beta = action_series(partner, 24)
            for k in GOLDEN_ORDERS:
                assert beta[k] == pytest.approx(golden_value(partner, k), rel=1e-9, abs=1e-12)

    def test_non_hermitian_report_passes(self):
        """Higher orders either match or are arbitrated through the partner."""
        report = golden_validate(H_TABLE1)
        assert report.passed
        assert report.family == "H"
        assert [e.k for e in report.entries] == list(GOLDEN_ORDERS)

    def test_unknown_order(self):
        with pytest.raises(DomainError):
            golden_value(H_TABLE1, 9)

    def test_no_closed_form_for_mixed_potential(self):
        with pytest.raises(DomainError):
            golden_value(PotentialSpec(-1.0, 1.0, 1.0), 0)


class TestQuantization:
    def test_j_eval_rejects_non_positive_energy(self):
        series = action_series(H_TABLE1, 6)
        with pytest.raises(DomainError):
            j_eval(series, 0.0)

    def test_j_eval_derivative(self):
        series = action_series(H_TABLE1, 12)
        E, h = 20.0, 1e-5
        J_plus, _ = j_eval(series, E + h)
        J_minus, _ = j_eval(series, E - h)
        assert j_eval(series, E)[1] == pytest.approx((J_plus - J_minus) / (2 * h), rel=1e-7)

    @pytest.mark.parametrize("spec", [H_TABLE1, H_TABLE2])
    def test_j_monotone(self, spec):
        series = action_series(spec, 30)
        grid = np.linspace(1.0, 100.0, 400)
        values = np.array([j_eval(series, E) for E in grid])
        assert np.all(np.diff(values[:, 0]) > 0)
        assert np.all(values[:, 1] > 0)

    def test_dropping_an_order_stays_within_its_term(self):
        series = action_series(H_TABLE1, 24)
        shorter = action_series(H_TABLE1, 21)
        E = 25.0
        gap = abs(j_eval(series, E)[0] - j_eval(shorter, E)[0])
        assert gap <= abs(series[24]) * E ** (-(24 - 3) / 4) * (1 + 1e-9)

    def test_leading_order_scaling(self):
        """With only b_0 and b_3, J = n hbar solves in closed form."""
        series = action_series(H_TABLE1, 3)
        b0 = series[0].real
        for n in (2, 5):
            assert solve_quantization(series, n) == pytest.approx(((n + 0.5) / b0) ** (4 / 3), rel=1e-10)

    @pytest.mark.parametrize("spec, expected", [(H_TABLE1, E_J_TABLE1), (H_TABLE2, E_J_TABLE2)])
    def test_energy_expansion_column(self, spec, expected):
        series = action_series(spec, 30)
        for n, E in enumerate(expected):
            assert solve_quantization(series, n) == pytest.approx(E, rel=5e-7), n

    def test_partner_gives_same_levels(self):
        b = action_series(H_TABLE1, 30)
        beta = action_series(h_TABLE1, 30)
        for n in (3, 6, 9):
            assert solve_quantization(b, n) == pytest.approx(solve_quantization(beta, n), rel=1e-9)

    def test_bracket_takes_over_from_newton(self):
        series = action_series(H_TABLE1, 30)
        for n in (0, 5):
            newton = solve_quantization(series, n)
            bracketed = solve_quantization(series, n, SolverOptions(max_iter=1))
            assert bracketed == pytest.approx(newton, rel=1e-10), n

    def test_negative_quantum_number(self):
        with pytest.raises(DomainError):
            solve_quantization(action_series(H_TABLE1, 6), -1)

    def test_levels_vector(self):
        levels = quantization_levels(action_series(H_TABLE1, 30), 10, SolverOptions(tol=1e-13))
        assert len(levels) == 11
        assert all(E is not None for E in levels)
        assert levels == sorted(levels)
