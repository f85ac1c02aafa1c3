import numpy as np
import pytest

from app.models.contour import ContourPath
from app.models.potential import PotentialSpec
from app.spectra import (
    ShootingOptions,
    default_contour,
    find_eigenvalue,
    integrate_schrodinger,
    matching_function,
    real_axis_brackets,
    scan_spectrum,
    spectrum_contour,
)
from app.utils.errors import DomainError, PathError

QUARTIC_WELL = PotentialSpec(1.0)
INVERTED_QUARTIC = PotentialSpec(-1.0)
H_TABLE1 = PotentialSpec.non_hermitian(1.0, 6.0)
h_TABLE1 = PotentialSpec.hermitian(4.0, 10.0)

# p^2 + x^4
WELL_LEVELS = [1.0603620905, 3.7996730298, 7.4556979380, 11.6447455113]
# p^2 - x^4, continued into the lower Stokes wedges
INVERTED_GROUND = 1.4771497535779
# p^2 + x^4 matched at the parity centre
CENTRED_WELL_PATH = ContourPath((np.pi, 6.0), (0.0, 6.0), (), 0j)


class TestDefaultContour:
    def test_lower_wedges(self):
        path = default_contour(H_TABLE1)
        assert path.entry_ray == pytest.approx((-5 * np.pi / 6, 7.0))
        assert path.exit_ray == pytest.approx((-np.pi / 6, 7.0))
        assert path.match_point == pytest.approx(-0.5j)
        path.validate(H_TABLE1)

    def test_upper_wedges_mirror_lower(self):
        lower = default_contour(INVERTED_QUARTIC, "lower")
        upper = default_contour(INVERTED_QUARTIC, "upper")
        np.testing.assert_allclose(np.array(upper.vertices), np.conj(lower.vertices), atol=1e-15)

    def test_real_segment_for_positive_quartic(self):
        path = default_contour(QUARTIC_WELL)
        np.testing.assert_allclose(np.array(path.vertices), [-6.0, 6.0], atol=1e-14)
        assert path.match_point == pytest.approx(0.5)

    def test_match_point_follows_the_well_bottom(self):
        path = default_contour(h_TABLE1)
        expected = -(10.0 / 16.0) ** (1 / 3) + 0.5 * 0.25 ** (1 / 6)
        assert path.match_point == pytest.approx(expected, rel=1e-12)
        assert default_contour(PotentialSpec(1.0, -10.0)).match_point.real > 1.0
        path.validate(h_TABLE1)

    def test_high_levels_push_endpoints_out(self):
        assert default_contour(INVERTED_QUARTIC, e_max=1e4).entry_ray[1] == pytest.approx(20.0)
        path = default_contour(QUARTIC_WELL, e_max=1e4)
        np.testing.assert_allclose(np.array(path.vertices), [-20.0, 20.0], atol=1e-13)

    def test_unknown_half_plane(self):
        with pytest.raises(DomainError):
            default_contour(H_TABLE1, "left")

    def test_spectrum_contour_uses_expansion_estimate(self):
        path, series = spectrum_contour(INVERTED_QUARTIC, 40)
        assert path.entry_ray[1] > 7.0
        assert series.K == 30


class TestContourPath:
    def test_legs_end_at_match_point(self):
        left, right = default_contour(H_TABLE1).legs()
        assert left[-1] == right[-1] == pytest.approx(-0.5j)
        assert left[0] == pytest.approx(7 * np.exp(-5j * np.pi / 6))
        assert right[0] == pytest.approx(7 * np.exp(-1j * np.pi / 6))

    def test_segments_chain_the_vertices(self):
        path = default_contour(H_TABLE1)
        segments = path.segments()
        assert len(segments) == len(path.vertices) - 1
        assert all(q == p2 for (_, q), (p2, _) in zip(segments, segments[1:]))

    def test_match_point_off_path(self):
        path = ContourPath((np.pi, 6.0), (0.0, 6.0), (), 1j)
        with pytest.raises(PathError):
            path.legs()

    def test_anti_stokes_ray_rejected(self):
        path = ContourPath((np.pi, 6.0), (0.0, 6.0), (), 0j)
        with pytest.raises(PathError, match="anti-Stokes"):
            path.validate(INVERTED_QUARTIC)

    def test_pole_on_path_rejected(self):
        path = ContourPath((-5 * np.pi / 6, 7.0), (-np.pi / 6, 7.0), (0j,), 0j)
        with pytest.raises(PathError, match="pole"):
            path.validate(H_TABLE1)

    def test_perturbed_moves_match_point_with_waypoint(self):
        path = default_contour(H_TABLE1).perturbed((0.1, -0.2j, 0.0))
        assert path.match_point == pytest.approx(-0.7j)
        path.validate(H_TABLE1)

    def test_sample_spacing(self):
        points = default_contour(QUARTIC_WELL).sample(13)
        np.testing.assert_allclose(points, np.linspace(-6, 6, 13), atol=1e-13)


class TestShooting:
    def test_direction_checked(self):
        with pytest.raises(DomainError):
            integrate_schrodinger(QUARTIC_WELL, 1.0, default_contour(QUARTIC_WELL), "sideways")

    def test_symmetric_well_solutions_mirror(self):
        """psi(-x) solves the same equation, so both sides agree up to the sign of psi'."""
        left = integrate_schrodinger(QUARTIC_WELL, 2.0, CENTRED_WELL_PATH, "from_entry")
        right = integrate_schrodinger(QUARTIC_WELL, 2.0, CENTRED_WELL_PATH, "from_exit")
        assert left.log_derivative == pytest.approx(-right.log_derivative, rel=1e-9)

    @pytest.mark.parametrize("path", [default_contour(QUARTIC_WELL), CENTRED_WELL_PATH], ids=["offset", "centred"])
    def test_matching_function_has_signal_on_real_line(self, path):
        values = [abs(matching_function(QUARTIC_WELL, E, path)) for E in (0.5, 1.06, 2.0, 3.8, 5.0)]
        assert values[1] < 0.05
        assert max(values) > 0.3

    @pytest.mark.parametrize("seed, n", [(1.0, 0), (3.7, 1), (7.4, 2)])
    def test_centred_match_finds_even_and_odd_levels(self, seed, n):
        result = find_eigenvalue(QUARTIC_WELL, CENTRED_WELL_PATH, seed)
        assert result.E.real == pytest.approx(WELL_LEVELS[n], rel=1e-9)
        assert abs(result.E.imag) < 1e-9

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_partner_at_the_hermitian_edge(self, n):
        """b = 0 at a = -hbar^2/4; p^2 + 4x^4 scales p^2 + x^4 by 4^(1/3)."""
        spec = PotentialSpec.hermitian(4.0, 0.0)
        expected = 4.0 ** (1 / 3) * WELL_LEVELS[n]
        result = find_eigenvalue(spec, default_contour(spec), 0.98 * expected)
        assert result.E.real == pytest.approx(expected, rel=1e-9)

    def test_multiplicity_checked(self):
        with pytest.raises(DomainError):
            find_eigenvalue(QUARTIC_WELL, default_contour(QUARTIC_WELL), 1.0, multiplicity=3)

    def test_quartic_well_ground_state(self):
        result = find_eigenvalue(QUARTIC_WELL, default_contour(QUARTIC_WELL), 1.0)
        assert result.E.real == pytest.approx(WELL_LEVELS[0], rel=1e-9)
        assert abs(result.E.imag) < 1e-9
        assert result.residual < 1e-8

    def test_inverted_quartic_ground_state(self):
        result = find_eigenvalue(INVERTED_QUARTIC, default_contour(INVERTED_QUARTIC), 1.5)
        assert result.E == pytest.approx(INVERTED_GROUND, rel=1e-8)

    def test_matching_function_vanishes_at_eigenvalue(self):
        path = default_contour(QUARTIC_WELL)
        assert abs(matching_function(QUARTIC_WELL, WELL_LEVELS[1], path)) < 1e-7
        assert abs(matching_function(QUARTIC_WELL, 2.5, path)) > 1e-3

    @pytest.mark.parametrize("spec, seed, expected", [
        (H_TABLE1, -2.4, -2.4558329),
        (h_TABLE1, -2.4, -2.4558327),
        (H_TABLE1, 4.5, 4.5014539),
    ])
    def test_table_entries(self, spec, seed, expected):
        result = find_eigenvalue(spec, default_contour(spec), seed)
        assert result.E.real == pytest.approx(expected, rel=2e-6)
        assert abs(result.E.imag) < 1e-8

    def test_contour_deformation_leaves_eigenvalue(self):
        path = default_contour(H_TABLE1)
        moved = path.perturbed((0.15 - 0.1j, -0.2j, -0.1 + 0.05j))
        E = find_eigenvalue(H_TABLE1, path, 4.5).E
        E_moved = find_eigenvalue(H_TABLE1, moved, 4.5).E
        assert abs(E - E_moved) <= 1e-8 * abs(E)

    def test_tighter_tolerances_agree(self):
        options = ShootingOptions(rtol=1e-13, atol=1e-15, secant_tol=1e-12)
        path = default_contour(INVERTED_QUARTIC)
        loose = find_eigenvalue(INVERTED_QUARTIC, path, 1.5).E
        tight = find_eigenvalue(INVERTED_QUARTIC, path, 1.5, options).E
        assert abs(loose - tight) < 1e-9


class TestScan:
    def test_real_axis_brackets(self):
        brackets, _ = real_axis_brackets(QUARTIC_WELL, default_contour(QUARTIC_WELL), 0.5, 5.0, 60)
        assert len(brackets) == 2
        for (lo, hi), E in zip(brackets, WELL_LEVELS):
            assert lo <= E <= hi

    def test_scan_quartic_well(self):
        scan = scan_spectrum(QUARTIC_WELL, default_contour(QUARTIC_WELL), 3,
                             options=ShootingOptions(sweep_points=150))
        assert scan.complete, scan.warnings
        assert [r.n for r in scan.results] == [0, 1, 2, 3]
        np.testing.assert_allclose(scan.energies.real, WELL_LEVELS, rtol=1e-8)

    def test_explicit_seeds_sorted_and_deduplicated(self):
        path = default_contour(QUARTIC_WELL)
        scan = scan_spectrum(QUARTIC_WELL, path, 1, seeds=[3.7, 1.1, 1.05])
        np.testing.assert_allclose(scan.energies.real, WELL_LEVELS[:2], rtol=1e-8)
        assert len(scan.collisions) == 1

    def test_missing_roots_reported(self):
        scan = scan_spectrum(QUARTIC_WELL, default_contour(QUARTIC_WELL), 2, seeds=[1.0])
        assert not scan.complete
        assert any("incomplete" in w for w in scan.warnings)

    def test_negative_n_max(self):
        with pytest.raises(DomainError):
            scan_spectrum(QUARTIC_WELL, default_contour(QUARTIC_WELL), -1)

    @pytest.mark.slow
    def test_table1_non_hermitian_column(self):
        expected = [-2.4558329, 4.5014539, 10.931991, 17.793015, 25.238132, 33.213971,
                    41.666149, 50.549802, 59.828456, 69.472108, 79.455684]
        path, series = spectrum_contour(H_TABLE1, 10)
        scan = scan_spectrum(H_TABLE1, path, 10, series=series)
        assert scan.complete, scan.warnings
        np.testing.assert_allclose(scan.energies.real, expected, rtol=2e-6)
