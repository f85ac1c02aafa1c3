"""
Equivalence of H = p^2 - g x^4 + a/x^2 and h = p^2 + 4g x^4 + b x.

The partners are related by alpha = 4g and b^2 = 16 g a + 4 g hbar^2. This
module checks the relation coefficient by coefficient and level by level,
follows the lowest levels of H through the loss of real eigenvalues, and
verifies the zero-energy supersymmetric ground states at g = hbar = 1 and
the common spectrum of p^2 - g x^4 + 4i hbar sqrt(g) x with both partners.
"""
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from scipy import optimize

from app.aee import action_series, quantization_levels
from app.models.contour import ContourPath
from app.models.equivalence import COALESCENCE_A, EquivalencePair, Regime, SweepResult
from app.models.potential import PotentialSpec
from app.models.reports import (
    CoefficientReport,
    CoefficientRow,
    IsospectralityReport,
    IsospectralityRow,
    LinearIsospectralityReport,
    LinearIsospectralityRow,
    SuperpotentialReport,
    SusyReport,
)
from app.models.series import BranchContour
from app.spectra import (
    ShootingOptions,
    default_contour,
    find_eigenvalue,
    integrate_schrodinger,
    scan_spectrum,
    spectrum_contour,
)
from app.utils.errors import DomainError, PathError, SolverError
from app.utils.logging import logger

# Sub-steps allowed when a sweep step loses a level
MAX_REFINE = 4
# Imaginary offsets, relative to the previous gap, tried when re-seeding a merged pair
PAIR_OFFSETS = (0.5, 1.0, 2.0)
# A level counts as real below this |Im E| / max(1, |E|)
REAL_TOL = 1e-7


def classify_regime(a: float, hbar: float = 1.0, threshold: Optional[float] = None) -> Regime:
    """a >= -hbar^2/4 has a real partner; below the coalescence point the spectrum is complex."""
    threshold = COALESCENCE_A * hbar ** 2 if threshold is None else threshold
    if a >= -hbar ** 2 / 4:
        return Regime.HERMITIAN_PARTNER
    if a > threshold:
        return Regime.PT_PARTNER
    return Regime.BROKEN


def hermitian_partner(
    g: float, a: float, hbar: float = 1.0, threshold: Optional[float] = None
) -> EquivalencePair:
    if not g > 0:
        raise DomainError(f"g must be positive, got {g}")
    b = complex(np.sqrt(complex(16 * g * a + 4 * g * hbar ** 2)))
    return EquivalencePair(
        g=float(g),
        a=float(a),
        hbar=float(hbar),
        b=b,
        H_spec=PotentialSpec.non_hermitian(g, a, hbar),
        h_spec=PotentialSpec.hermitian(4 * g, b, hbar),
        regime=classify_regime(a, hbar, threshold),
    )


def inverse_partner(g: float, b: complex, hbar: float = 1.0) -> float:
    """a = (b^2 - 4 g hbar^2) / 16 g; real whenever b is real or purely imaginary."""
    if not g > 0:
        raise DomainError(f"g must be positive, got {g}")
    a = (complex(b) ** 2 - 4 * g * hbar ** 2) / (16 * g)
    if abs(a.imag) > 1e-12 * max(1.0, abs(a)):
        raise DomainError(f"b = {b} has no real partner a")
    return float(a.real)


def coefficient_identity_check(
    g: float,
    a: float,
    hbar: float = 1.0,
    K: int = 60,
    a_offset: float = 0.0,
    tol: float = 1e-9,
    contour_H: Optional[BranchContour] = None,
    contour_h: Optional[BranchContour] = None,
) -> CoefficientReport:
    """
    b_k of H at a + a_offset against beta_k of the partner built from a.

    A nonzero a_offset breaks the relation on purpose; b_6 then moves by
    g^(1/4) a_offset Gamma(3/4) / (sqrt(2 pi) Gamma(1/4)).
    """
    pair = hermitian_partner(g, a, hbar)
    H_spec = PotentialSpec.non_hermitian(g, a + a_offset, hbar)
    b = action_series(H_spec, K, contour_H)
    beta = action_series(pair.h_spec, K, contour_h)

    rows = []
    for k in range(K + 1):
        scale = max(abs(b[k]), abs(beta[k]))
        deviation = abs(b[k] - beta[k]) / scale if scale > 0 else 0.0
        rows.append(CoefficientRow(
            k=k, b_re=b[k].real, b_im=b[k].imag, beta_re=beta[k].real, beta_im=beta[k].imag,
            deviation=deviation,
        ))
    worst = max(r.deviation for r in rows)
    logger.info(f"Coefficient identity g={g} a={a}+{a_offset} K={K}: max deviation {worst:.3e}")
    return CoefficientReport(
        g=g, a=a, a_offset=a_offset, hbar=hbar, K=K, rows=rows,
        max_deviation=worst, tolerance=tol, passed=worst <= tol,
    )


def isospectrality_check(
    pair: EquivalencePair,
    n_max: int = 10,
    options: ShootingOptions = ShootingOptions(),
    tol: float = 2e-6,
) -> IsospectralityReport:
    path_h, series_h = spectrum_contour(pair.h_spec, n_max)
    path_H, series_H = spectrum_contour(pair.H_spec, n_max)
    scan_h = scan_spectrum(pair.h_spec, path_h, n_max, options=options, series=series_h)
    scan_H = scan_spectrum(pair.H_spec, path_H, n_max, options=options, series=series_H)

    rows = []
    for E_H, E_h in zip(scan_H.results, scan_h.results):
        diff = abs(E_H.E - E_h.E)
        rows.append(IsospectralityRow(
            n=E_h.n, E_H_re=E_H.E.real, E_H_im=E_H.E.imag, E_h_re=E_h.E.real, E_h_im=E_h.E.imag,
            abs_difference=diff, rel_difference=diff / max(1.0, abs(E_h.E)),
        ))
    warnings = [f"H: {w}" for w in scan_H.warnings] + [f"h: {w}" for w in scan_h.warnings]
    worst = max((r.rel_difference for r in rows), default=float("inf"))
    passed = worst <= tol and len(rows) == n_max + 1
    if not passed:
        logger.warning(f"Isospectrality failed for a={pair.a}: max rel difference {worst:.3e}, {len(rows)} rows")
    return IsospectralityReport(
        g=pair.g, a=pair.a, b_re=pair.b.real, b_im=pair.b.imag, hbar=pair.hbar,
        regime=pair.regime.value, rows=rows, max_rel_difference=worst, tolerance=tol,
        passed=passed, warnings=warnings,
    )


# ---------------------------------------------------------------------------
# PT transition sweep
# ---------------------------------------------------------------------------


def _is_real(E: complex) -> bool:
    return abs(E.imag) <= REAL_TOL * max(1.0, abs(E))


def _extrapolate(history: List[Tuple[float, np.ndarray]], a_to: float) -> np.ndarray:
    a1, levels1 = history[-1]
    if len(history) < 2:
        return levels1.copy()
    a0, levels0 = history[-2]
    return levels1 + (levels1 - levels0) * (a_to - a1) / (a1 - a0)


def _troubled(solved: List[Optional[complex]], tol: float) -> List[int]:
    bad = {i for i, E in enumerate(solved) if E is None}
    for i in range(len(solved)):
        for j in range(i + 1, len(solved)):
            if solved[i] is None or solved[j] is None:
                continue
            if abs(solved[i] - solved[j]) < tol * max(1.0, abs(solved[i])):
                bad.update((i, j))
    return sorted(bad)


def _reseed_pair(
    spec: PotentialSpec, path: ContourPath, lower: complex, upper: complex,
    taken: Sequence[complex], options: ShootingOptions,
) -> Tuple[complex, complex]:
    """Re-solve two neighbouring levels from conjugate seeds around their midpoint."""
    centre = 0.5 * (lower + upper)
    spread = max(abs(upper - lower), 0.1)

    def fresh(E: complex) -> bool:
        return all(abs(E - t) >= options.collision_tol * max(1.0, abs(E)) for t in taken)

    for factor in PAIR_OFFSETS:
        delta = factor * spread
        try:
            first = find_eigenvalue(spec, path, centre.real + 1j * delta, options).E
            second = find_eigenvalue(spec, path, centre.real - 1j * delta, options).E
        except SolverError:
            continue
        distinct = abs(first - second) >= options.collision_tol * max(1.0, abs(first))
        if distinct and fresh(first) and fresh(second):
            logger.debug(f"Re-seeded pair near {centre:.6g} with offset {delta:.3g}: {first:.8g}, {second:.8g}")
            return first, second
    raise SolverError(f"could not recover the level pair near {centre:.8g}", last=centre)


def _solve_levels(
    spec: PotentialSpec, path: ContourPath, seeds: np.ndarray, previous: np.ndarray,
    options: ShootingOptions,
) -> np.ndarray:
    solved: List[Optional[complex]] = []
    for seed in seeds:
        try:
            solved.append(find_eigenvalue(spec, path, seed, options).E)
        except SolverError:
            solved.append(None)

    trouble = _troubled(solved, options.collision_tol)
    while trouble:
        i = trouble[0]
        j = i + 1 if i + 1 < len(solved) else i - 1
        logger.warning(f"Levels {min(i, j)} and {max(i, j)} merged or failed; re-seeding as a pair")
        taken = [E for k, E in enumerate(solved) if k not in (i, j) and E is not None]
        solved[i], solved[j] = _reseed_pair(spec, path, previous[min(i, j)], previous[max(i, j)],
                                            taken, options)
        trouble = _troubled(solved, options.collision_tol)
    return np.array(sorted(solved, key=lambda E: (E.real, E.imag)), dtype=complex)


def _advance(
    g: float, hbar: float, a_to: float, history: List[Tuple[float, np.ndarray]],
    path: ContourPath, options: ShootingOptions, depth: int = 0,
) -> np.ndarray:
    a_from, previous = history[-1]
    spec = hermitian_partner(g, a_to, hbar).h_spec
    try:
        return _solve_levels(spec, path, _extrapolate(history, a_to), previous, options)
    except (SolverError, PathError) as e:
        if depth >= MAX_REFINE:
            raise SolverError(f"tracking lost at a={a_to:.6g}: {e}", last=a_to) from e
        logger.warning(f"Step to a={a_to:.6g} failed ({e}); halving")
        mid = 0.5 * (a_from + a_to)
        history.append((mid, _advance(g, hbar, mid, history, path, options, depth + 1)))
        return _advance(g, hbar, a_to, history, path, options, depth + 1)


def _locate_coalescence(a_values: np.ndarray, levels: np.ndarray) -> Tuple[Optional[float], Optional[float]]:
    """
    First a (scanning downward) where the two lowest levels leave the real axis.

    q(a) = ((E_1 - E_0)/2)^2 is analytic through the exceptional point, positive
    while both levels are real and negative for the conjugate pair, so its root
    is interpolated from the rows around the transition.
    """
    finite = np.all(np.isfinite(levels[:, :2]), axis=1)
    real = np.array([finite[i] and _is_real(levels[i, 0]) and _is_real(levels[i, 1])
                     for i in range(len(a_values))])
    broken = [i for i in range(1, len(a_values)) if real[i - 1] and finite[i] and not real[i]]
    if not broken:
        return None, None
    i = broken[0]
    rows = [r for r in range(max(0, i - 2), min(len(a_values), i + 2)) if finite[r]]
    q = (((levels[rows, 1] - levels[rows, 0]) / 2) ** 2).real
    coeffs = np.polyfit(a_values[rows], q, min(2, len(rows) - 1))
    lo, hi = a_values[i], a_values[i - 1]
    roots = [r.real for r in np.roots(coeffs) if abs(r.imag) < 1e-12 and lo <= r.real <= hi]
    if roots:
        a_c = min(roots, key=lambda r: abs(r - 0.5 * (lo + hi)))
    else:
        q_hi, q_lo = q[rows.index(i - 1)], q[rows.index(i)]
        a_c = hi + (lo - hi) * q_hi / (q_hi - q_lo)
    return float(a_c), float(0.5 * (hi - lo))


def _locate_zero_crossing(
    g: float, hbar: float, a_values: np.ndarray, levels: np.ndarray, path: ContourPath,
    options: ShootingOptions,
) -> Optional[float]:
    ground = levels[:, 0]
    for i in range(1, len(a_values)):
        e_hi, e_lo = ground[i - 1], ground[i]
        if not (np.isfinite(e_hi) and np.isfinite(e_lo) and _is_real(e_hi) and _is_real(e_lo)):
            continue
        if e_hi.real * e_lo.real > 0:
            continue
        a_hi, a_lo = a_values[i - 1], a_values[i]

        def ground_energy(a: float) -> float:
            seed = e_hi + (e_lo - e_hi) * (a - a_hi) / (a_lo - a_hi)
            spec = hermitian_partner(g, a, hbar).h_spec
            return find_eigenvalue(spec, path, seed, options).E.real

        # a grid row can sit on the crossing itself; then the recomputed sign may flip
        half = 0.5 * (a_hi - a_lo)
        for lo, hi in ((a_lo, a_hi), (a_lo - half, a_hi), (a_lo, a_hi + half)):
            try:
                return float(optimize.brentq(ground_energy, lo, hi, xtol=1e-10))
            except ValueError:
                continue
        logger.warning(f"E0 changes sign between a={a_lo:.6g} and {a_hi:.6g} but brentq failed")
        return float(0.5 * (a_lo + a_hi))
    return None


def _consistency(
    g: float, hbar: float, a_values: np.ndarray, levels: np.ndarray, samples: int,
    options: ShootingOptions,
) -> List[Tuple[float, float]]:
    """Relative gap between H-side and h-side levels at evenly spaced tracked rows."""
    usable = [i for i in range(len(a_values))
              if np.all(np.isfinite(levels[i])) and all(_is_real(E) for E in levels[i])]
    if not usable or samples <= 0:
        return []
    picks = sorted({usable[int(round(t))] for t in np.linspace(0, len(usable) - 1, samples)})
    out = []
    for i in picks:
        spec = PotentialSpec.non_hermitian(g, a_values[i], hbar)
        path = default_contour(spec, e_max=float(np.abs(levels[i]).max()))
        try:
            worst = max(
                abs(find_eigenvalue(spec, path, E, options).E - E) / max(1.0, abs(E)) for E in levels[i]
            )
        except (SolverError, PathError) as e:
            logger.warning(f"H-side check at a={a_values[i]:.6g} failed: {e}")
            worst = float("inf")
        out.append((float(a_values[i]), float(worst)))
    return out


def pt_transition_scan(
    g: float = 1.0,
    hbar: float = 1.0,
    a_range: Tuple[float, float] = (-4.0, 3.0),
    steps: int = 141,
    n_levels: int = 6,
    options: ShootingOptions = ShootingOptions(),
    consistency_samples: int = 10,
) -> SweepResult:
    """
    Follow the n_levels lowest eigenvalues of H from a_max down to a_min.

    Levels are tracked on the real line through the partner h, whose linear
    coupling turns imaginary below a = -hbar^2/4; each step is seeded by linear
    extrapolation of the two previous ones.
    """
    a_min, a_max = a_range
    if not g > 0 or not hbar > 0:
        raise DomainError(f"g and hbar must be positive, got g={g} hbar={hbar}")
    if steps < 2 or not a_min < a_max:
        raise DomainError(f"need steps >= 2 and a_min < a_max, got {steps}, {a_range}")

    a_values = np.linspace(a_max, a_min, steps)
    eigenvalues = np.full((steps, n_levels), np.nan, dtype=complex)
    notes: List[str] = []

    first = hermitian_partner(g, a_values[0], hbar).h_spec
    start = scan_spectrum(first, default_contour(first), n_levels - 1, options=options)
    if len(start.results) < n_levels:
        raise SolverError(f"could not seed the sweep at a={a_max}: {start.warnings}")
    path = default_contour(first, e_max=2.0 * float(np.abs(start.energies).max()))
    eigenvalues[0] = start.energies

    history = [(float(a_values[0]), start.energies)]
    lost_at = None
    for i in range(1, steps):
        try:
            levels = _advance(g, hbar, float(a_values[i]), history, path, options)
        except SolverError as e:
            lost_at = float(a_values[i])
            notes.append(f"tracking lost at a={lost_at:.6g}: {e}")
            logger.warning(notes[-1])
            break
        eigenvalues[i] = levels
        history.append((float(a_values[i]), levels))
        logger.debug(f"a={a_values[i]:.4f}: E0={levels[0]:.8g} E1={levels[1]:.8g}")

    coalescence_a, coalescence_error = _locate_coalescence(a_values, eigenvalues)
    zero_crossing_a = _locate_zero_crossing(g, hbar, a_values, eigenvalues, path, options)
    consistency = _consistency(g, hbar, a_values, eigenvalues, consistency_samples, options)

    if zero_crossing_a is not None and abs(zero_crossing_a - 2 * hbar ** 2) > 1e-3:
        notes.append(f"E0 changes sign at a={zero_crossing_a:.6g}, not at 2 hbar^2")
    if coalescence_a is not None and abs(coalescence_a - COALESCENCE_A * hbar ** 2) > 0.05:
        notes.append(f"coalescence at a={coalescence_a:.4f} differs from {COALESCENCE_A} hbar^2")

    result = SweepResult(g, hbar, a_values, eigenvalues, coalescence_a, coalescence_error,
                         zero_crossing_a, consistency, lost_at, notes)
    negative = result.min_real_between(-2.7 * hbar ** 2, 2.0 * hbar ** 2)
    if negative is not None and negative <= 0:
        notes.append(f"a level with Re E = {negative:.4g} <= 0 inside (-2.7, 2) hbar^2")
    logger.info(f"Sweep over a in [{a_min}, {a_max}] ({steps} steps): coalescence at {coalescence_a}, "
                f"E0 = 0 at {zero_crossing_a}")
    return result


# ---------------------------------------------------------------------------
# Supersymmetric ground states (g = hbar = 1)
# ---------------------------------------------------------------------------

_x = sp.symbols("x")
SUSY_H1 = PotentialSpec(-1.0, 4j, 0j)
SUSY_H2 = PotentialSpec(-1.0, 0j, 2.0)


def ground_states() -> Tuple[Tuple[sp.Expr, sp.Expr], Tuple[sp.Expr, sp.Expr]]:
    """(Phi, V) of H1 = p^2 - x^4 + 4ix and H2 = p^2 - x^4 + 2/x^2."""
    phi1 = sp.I * _x * sp.exp(sp.I * _x ** 3 / 3)
    phi2 = sp.exp(-sp.I * _x ** 3 / 3) / (sp.I * _x)
    return (phi1, -_x ** 4 + 4 * sp.I * _x), (phi2, -_x ** 4 + 2 / _x ** 2)


def _numeric(*exprs: sp.Expr) -> Callable:
    return sp.lambdify(_x, list(exprs), "numpy")


def ground_state_residual(which: int, points) -> np.ndarray:
    """|-Phi'' + V Phi| relative to the size of the two terms."""
    phi, v = ground_states()[which - 1]
    second, potential_term = _numeric(sp.diff(phi, _x, 2), v * phi)(np.asarray(points, dtype=complex))
    return np.abs(-second + potential_term) / np.maximum(np.abs(second), np.abs(potential_term))


def superpotentials() -> Tuple[sp.Expr, sp.Expr]:
    """W = -(ln Phi)' of both ground states."""
    (phi1, _), (phi2, _) = ground_states()
    return sp.simplify(-sp.diff(phi1, _x) / phi1), sp.simplify(-sp.diff(phi2, _x) / phi2)


def superpotential_value(which: int, x: complex) -> complex:
    return complex(_numeric(superpotentials()[which - 1])(complex(x))[0])


def _default_points(n_samples: int) -> np.ndarray:
    return np.concatenate((
        default_contour(SUSY_H1, "upper").sample(n_samples),
        default_contour(SUSY_H2, "lower").sample(n_samples),
        [2j, 1 + 1j, 1 + 0.5j, -1 - 0.5j],
    ))


def susy_residual_check(
    n_samples: int = 50,
    options: ShootingOptions = ShootingOptions(),
    tol: float = 1e-12,
    energy_tol: float = 1e-6,
    seed: complex = 0.2,
) -> SusyReport:
    """
    Residuals of the closed-form zero-energy ground states on their contours,
    the log-derivative of the shooting solution against them at the match
    point, and the shooting ground energies.
    """
    path1 = default_contour(SUSY_H1, "upper")
    path2 = default_contour(SUSY_H2, "lower")
    residual1 = float(ground_state_residual(1, path1.sample(n_samples)).max())
    residual2 = float(ground_state_residual(2, path2.sample(n_samples)).max())

    log_derivatives = []
    for which, (spec, path) in enumerate(((SUSY_H1, path1), (SUSY_H2, path2)), start=1):
        phi, _ = ground_states()[which - 1]
        exact = complex(_numeric(sp.diff(phi, _x) / phi)(path.match_point)[0])
        worst = max(
            abs(integrate_schrodinger(spec, 0.0, path, direction, options).log_derivative - exact) / abs(exact)
            for direction in ("from_entry", "from_exit")
        )
        log_derivatives.append(float(worst))

    # W has a double zero at the H1 ground state on the upper wedges
    E1 = find_eigenvalue(SUSY_H1, path1, seed, options, multiplicity=2).E
    E2 = find_eigenvalue(SUSY_H2, path2, seed, options).E
    passed = (max(residual1, residual2) <= tol and max(log_derivatives) <= 1e-8
              and max(abs(E1), abs(E2)) <= energy_tol)
    logger.info(f"SUSY ground states: residuals {residual1:.2e}, {residual2:.2e}; E0 = {E1:.3e}, {E2:.3e}")
    return SusyReport(
        residual_phi1=residual1,
        residual_phi2=residual2,
        log_derivative_phi1=log_derivatives[0],
        log_derivative_phi2=log_derivatives[1],
        ground_energy_H1_re=E1.real,
        ground_energy_H1_im=E1.imag,
        ground_energy_H2_re=E2.real,
        ground_energy_H2_im=E2.imag,
        residual_tolerance=tol,
        energy_tolerance=energy_tol,
        passed=passed,
    )


def superpotential_check(points=None, n_samples: int = 50, tol: float = 1e-12) -> SuperpotentialReport:
    """W1 = -(1 + ix^3)/x, W2 = -W1, and W^2 -/+ W' give the two partner potentials."""
    points = _default_points(n_samples) if points is None else np.asarray(points, dtype=complex)
    w1, w2 = superpotentials()
    (_, v1), (_, v2) = ground_states()
    closed = -(1 + sp.I * _x ** 3) / _x
    values = _numeric(w1, w2, closed, sp.diff(w1, _x), sp.diff(w2, _x), v1, v2)(points)
    W1, W2, C, dW1, dW2, V1, V2 = (np.broadcast_to(np.asarray(v, dtype=complex), points.shape) for v in values)

    def rel(lhs, rhs, scale):
        return float((np.abs(lhs - rhs) / scale).max())

    scale1 = np.abs(W1) ** 2 + np.abs(dW1)
    scale2 = np.abs(W2) ** 2 + np.abs(dW2)
    report = dict(
        closed_form_H1=rel(W1, C, np.abs(C)),
        closed_form_H2=rel(W2, -C, np.abs(C)),
        antisymmetry=rel(W1, -W2, np.abs(W1)),
        partner_minus_H1=rel(W1 ** 2 - dW1, V1, scale1),
        partner_plus_H1=rel(W1 ** 2 + dW1, V2, scale1),
        partner_minus_H2=rel(W2 ** 2 - dW2, V2, scale2),
        partner_plus_H2=rel(W2 ** 2 + dW2, V1, scale2),
    )
    passed = max(report.values()) <= tol
    if not passed:
        logger.warning(f"Superpotential identities off by {max(report.values()):.3e}")
    return SuperpotentialReport(**report, tolerance=tol, passed=passed)


# ---------------------------------------------------------------------------
# The imaginary linear potential and its two isospectral partners
# ---------------------------------------------------------------------------


def linear_partner(g: float, hbar: float = 1.0) -> Tuple[PotentialSpec, EquivalencePair]:
    """
    p^2 - g x^4 + 4i hbar sqrt(g) x together with the pair at a = 2 hbar^2:
    its SUSY partner p^2 - g x^4 + 2 hbar^2/x^2 and p^2 + 4g x^4 + 6 hbar sqrt(g) x.
    """
    pair = hermitian_partner(g, 2.0 * hbar ** 2, hbar)
    return PotentialSpec(-g, 4j * hbar * np.sqrt(g), 0j, hbar), pair


def _linear_levels(
    spec: PotentialSpec, path: ContourPath, seeds: Sequence[complex], ground_seed: complex,
    n_max: int, options: ShootingOptions,
) -> Tuple[List[complex], List[str]]:
    warnings = []
    try:
        # W has a double zero at the E = 0 ground state on the upper wedges
        energies = [find_eigenvalue(spec, path, ground_seed, options, multiplicity=2).E]
    except (SolverError, PathError) as e:
        energies = []
        warnings.append(f"ground state from seed {ground_seed:.4g} failed: {e}")
    if n_max > 0:
        scan = scan_spectrum(spec, path, n_max - 1, seeds=seeds, options=options)
        energies.extend(complex(E) for E in scan.energies)
        warnings.extend(scan.warnings)
    return energies, warnings


def linear_isospectrality_check(
    g: float = 1.0,
    hbar: float = 1.0,
    n_max: int = 6,
    options: ShootingOptions = ShootingOptions(),
    tol: float = 2e-6,
    seed: complex = 0.2,
) -> LinearIsospectralityReport:
    """
    The n_max + 1 lowest levels of all three members of linear_partner, each
    on its own contour. Excited levels of the linear potential start from
    E_J of the Hermitian member.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    linear, pair = linear_partner(g, hbar)
    path_h, series_h = spectrum_contour(pair.h_spec, n_max)
    path_H, series_H = spectrum_contour(pair.H_spec, n_max)
    path_linear, _ = spectrum_contour(linear, n_max, "upper", series=series_h)

    scan_h = scan_spectrum(pair.h_spec, path_h, n_max, options=options, series=series_h)
    scan_H = scan_spectrum(pair.H_spec, path_H, n_max, options=options, series=series_H)
    levels = quantization_levels(series_h, max(n_max, 1))
    seeds = [E for E in levels[1:n_max + 1] if E is not None]
    ground_seed = seed * hbar ** (4.0 / 3.0) * g ** (1.0 / 3.0)
    energies_linear, warnings_linear = _linear_levels(linear, path_linear, seeds, ground_seed, n_max, options)

    rows = []
    for n, (E_linear, E_H, E_h) in enumerate(zip(energies_linear, scan_H.energies, scan_h.energies)):
        E_linear, E_H, E_h = complex(E_linear), complex(E_H), complex(E_h)
        spread = max(abs(E_linear - E_h), abs(E_H - E_h), abs(E_linear - E_H))
        rows.append(LinearIsospectralityRow(
            n=n, E_linear_re=E_linear.real, E_linear_im=E_linear.imag,
            E_H_re=E_H.real, E_H_im=E_H.imag, E_h_re=E_h.real, E_h_im=E_h.imag,
            rel_spread=spread / max(1.0, abs(E_h)),
        ))
    warnings = ([f"linear: {w}" for w in warnings_linear] + [f"H: {w}" for w in scan_H.warnings]
                + [f"h: {w}" for w in scan_h.warnings])
    worst = max((r.rel_spread for r in rows), default=float("inf"))
    passed = worst <= tol and len(rows) == n_max + 1
    if not passed:
        logger.warning(f"Linear-potential isospectrality failed at g={g}: max spread {worst:.3e}, {len(rows)} rows")
    logger.info(f"Linear potential, SUSY partner and Hermitian partner agree to {worst:.3e} over {len(rows)} levels")
    return LinearIsospectralityReport(
        g=pair.g, hbar=pair.hbar, b=pair.b.real, rows=rows, max_rel_spread=worst, tolerance=tol,
        passed=passed, warnings=warnings,
    )
