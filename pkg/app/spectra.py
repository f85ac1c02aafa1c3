"""
Direct eigenvalues by two-sided shooting along a complex contour.

psi'' = (V(x) - E) psi / hbar^2 is integrated inward from both ray endpoints
with the solution that decays toward infinity, and the Wronskian of the two
solutions at the match point vanishes exactly at eigenvalues.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from app.aee import action_series, quantization_levels
from app.models.contour import ContourPath
from app.models.potential import PotentialSpec
from app.models.results import BoundaryValue, EigenResult, SpectrumScan
from app.models.series import ActionSeries
from app.utils.errors import DomainError, PathError, SolverError
from app.utils.logging import logger

DIRECTIONS = ("from_entry", "from_exit")
HALF_PLANES = ("lower", "upper")
# Match point offset from the well bottom, in units of (hbar^2 / A)^(1/6)
MATCH_OFFSET = 0.5
# E_J order used to place contours and seed scans
SEED_ORDER = 30
# Finite-difference step for the double-root polish, relative to max(1, |E|)
POLISH_STEP = 1e-4


@dataclass(frozen=True)
class ShootingOptions:
    rtol: float = 1e-12
    atol: float = 1e-14
    max_iter: int = 60
    secant_tol: float = 1e-10
    sweep_points: int = 400
    renorm_threshold: float = 1e10
    max_chunk: float = 0.5
    collision_tol: float = 1e-8


def default_contour(
    spec: PotentialSpec, half_plane: str = "lower", e_max: Optional[float] = None
) -> ContourPath:
    """
    Real segment [-L, L] for a positive quartic, matched just right
    of the bottom of the well; otherwise the PT-symmetric
    wedge pair at (-pi/6, -5pi/6) joined by a chord through -0.5i, or its
    mirror image above the origin.
    """
    if half_plane not in HALF_PLANES:
        raise DomainError(f"half_plane must be one of {HALF_PLANES}, got {half_plane!r}")
    # keep the endpoints well beyond the outermost turning point
    reach = 0.0 if e_max is None else 2.0 * (abs(e_max) / abs(spec.quartic)) ** 0.25

    if spec.sigma == 1:
        length = max(6.0, reach)
        quartic, linear = spec.quartic, spec.linear.real
        bottom = -np.sign(linear) * (abs(linear) / (4.0 * quartic)) ** (1.0 / 3.0)
        match = bottom + MATCH_OFFSET * (spec.hbar ** 2 / quartic) ** (1.0 / 6.0)
        return ContourPath((np.pi, length), (0.0, length), (), complex(match))

    radius = max(7.0, reach)
    side = -1.0 if half_plane == "lower" else 1.0
    right, left = side * np.pi / 6, side * 5 * np.pi / 6
    chord = side * 0.5j
    waypoints = (complex(np.exp(1j * left)), chord, complex(np.exp(1j * right)))
    return ContourPath((left, radius), (right, radius), waypoints, chord)


def spectrum_contour(
    spec: PotentialSpec, n_max: int, half_plane: str = "lower",
    series: Optional[ActionSeries] = None,
) -> Tuple[ContourPath, ActionSeries]:
    """default_contour sized by the energy-expansion estimate of level n_max."""
    series = series or action_series(spec, SEED_ORDER)
    known = [E for E in quantization_levels(series, max(n_max, 2)) if E is not None]
    e_max = 1.5 * max(known) if known else None
    return default_contour(spec, half_plane, e_max), series


def _propagate(
    spec: PotentialSpec, E: complex, xa: complex, xb: complex, state: np.ndarray,
    options: ShootingOptions,
) -> Tuple[np.ndarray, int]:
    dx = complex(xb - xa)
    xa = complex(xa)
    quartic, linear, invsq = spec.quartic, spec.linear, spec.invsq
    inv_hbar2 = 1.0 / spec.hbar ** 2

    def rhs(s, y):
        x = xa + dx * s
        v = quartic * x ** 4 + linear * x - E
        if invsq:
            v += invsq / (x * x)
        return np.array([y[1] * dx, v * inv_hbar2 * y[0] * dx])

    sol = integrate.solve_ivp(
        rhs, (0.0, 1.0), state, method="DOP853", rtol=options.rtol, atol=options.atol
    )
    if sol.status != 0:
        raise PathError(f"integration from {xa:.4g} to {complex(xb):.4g} failed at E={E:.6g}: {sol.message}")
    return sol.y[:, -1], sol.nfev


def integrate_schrodinger(
    spec: PotentialSpec,
    E: complex,
    path: ContourPath,
    direction: str = "from_entry",
    options: ShootingOptions = ShootingOptions(),
) -> BoundaryValue:
    if direction not in DIRECTIONS:
        raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if not np.isfinite(E):
        raise DomainError(f"energy must be finite, got {E}")
    E = complex(E)
    left, right = path.legs()
    leg = left if direction == "from_entry" else right

    start = leg[0]
    inward = (leg[1] - start) / abs(leg[1] - start)
    kappa = np.sqrt(complex(spec.potential(start)) - E) / spec.hbar
    growth = (kappa * inward).real
    if abs(growth) <= 1e-8 * abs(kappa):
        raise PathError(f"turning point at the path endpoint {start:.4g} for E={E:.6g}")
    if growth < 0:
        kappa = -kappa

    # decays outward, i.e. grows along the inward tangent
    state = np.array([1.0, kappa], dtype=complex)
    evaluations = 0
    for p, q in zip(leg[:-1], leg[1:]):
        pieces = max(1, int(np.ceil(abs(q - p) / options.max_chunk)))
        nodes = p + (q - p) * np.linspace(0.0, 1.0, pieces + 1)
        for xa, xb in zip(nodes[:-1], nodes[1:]):
            state, nfev = _propagate(spec, E, xa, xb, state, options)
            evaluations += nfev
            size = max(abs(state[0]), abs(state[1]))
            if size > options.renorm_threshold:
                state = state / size
    return BoundaryValue(complex(state[0]), complex(state[1]), evaluations)


def _matching(
    spec: PotentialSpec, E: complex, path: ContourPath, options: ShootingOptions
) -> Tuple[complex, int]:
    left = integrate_schrodinger(spec, E, path, "from_entry", options)
    right = integrate_schrodinger(spec, E, path, "from_exit", options)
    cross = left.psi * right.dpsi - right.psi * left.dpsi
    # sine of the angle between the two (psi, psi') vectors
    norm = np.hypot(abs(left.psi), abs(left.dpsi)) * np.hypot(abs(right.psi), abs(right.dpsi))
    if norm == 0:
        raise PathError(f"both boundary solutions vanish at the match point for E={E:.6g}")
    return cross / norm, left.evaluations + right.evaluations


def matching_function(
    spec: PotentialSpec, E: complex, path: ContourPath,
    options: ShootingOptions = ShootingOptions(),
) -> complex:
    """Normalised Wronskian of the two decaying solutions; zero at eigenvalues."""
    return _matching(spec, E, path, options)[0]


def _polish_double_root(
    spec: PotentialSpec, path: ContourPath, E_seed: complex, options: ShootingOptions
) -> EigenResult:
    """
    Newton steps on dW/dE, with both derivatives taken from the parabola
    through W at E - h, E, E + h. A double zero of W is a simple zero of dW/dE.
    """
    E, evaluations, last_shift = complex(E_seed), 0, np.inf
    for iteration in range(1, options.max_iter + 1):
        h = POLISH_STEP * max(1.0, abs(E))
        samples = [_matching(spec, e, path, options) for e in (E - h, E, E + h)]
        evaluations += sum(nfev for _, nfev in samples)
        w_lo, w_mid, w_hi = (w for w, _ in samples)
        slope = (w_hi - w_lo) / (2 * h)
        curvature = (w_hi - 2 * w_mid + w_lo) / h ** 2
        if curvature == 0:
            raise SolverError(f"flat matching function at E={E:.10g}", last=E, iterations=iteration)
        shift = -slope / curvature
        if not np.isfinite(shift):
            raise SolverError(f"double-root polish diverged from seed {E_seed}", last=E, iterations=iteration)
        # below h the steps stop contracting once they reach the noise of the difference quotients
        settled = abs(shift) < h and abs(shift) >= last_shift
        if settled or abs(shift) < options.secant_tol * max(1.0, abs(E)):
            if abs(shift) < last_shift:
                E += shift
            w, nfev = _matching(spec, E, path, options)
            logger.debug(f"Double eigenvalue {E:.12g} from seed {E_seed} in {iteration} polish steps")
            return EigenResult(None, E, abs(w), path, iteration, evaluations + nfev)
        E += shift
        last_shift = abs(shift)

    raise SolverError(f"double-root polish from seed {E_seed} did not converge in {options.max_iter} iterations",
                      last=E, iterations=options.max_iter)


def find_eigenvalue(
    spec: PotentialSpec, path: ContourPath, E_seed: complex,
    options: ShootingOptions = ShootingOptions(),
    multiplicity: int = 1,
) -> EigenResult:
    """
    Secant iteration on the matching function; multiplicity=2 switches to
    Newton on dW/dE for an eigenvalue where W has a double zero.
    """
    if multiplicity not in (1, 2):
        raise DomainError(f"multiplicity must be 1 or 2, got {multiplicity}")
    path.validate(spec)
    if multiplicity == 2:
        return _polish_double_root(spec, path, E_seed, options)
    e_prev = complex(E_seed)
    e_cur = e_prev + 1e-3 * max(1.0, abs(e_prev))
    w_prev, evaluations = _matching(spec, e_prev, path, options)
    w_cur, nfev = _matching(spec, e_cur, path, options)
    evaluations += nfev

    for iteration in range(1, options.max_iter + 1):
        if w_cur == 0:
            return EigenResult(None, e_cur, 0.0, path, iteration, evaluations)
        if w_cur == w_prev:
            raise SolverError(f"secant stalled at E={e_cur:.10g}", last=e_cur, iterations=iteration)
        e_next = e_cur - w_cur * (e_cur - e_prev) / (w_cur - w_prev)
        if not np.isfinite(e_next):
            raise SolverError(f"secant diverged from seed {E_seed}", last=e_cur, iterations=iteration)
        e_prev, w_prev = e_cur, w_cur
        e_cur = e_next
        w_cur, nfev = _matching(spec, e_cur, path, options)
        evaluations += nfev
        if abs(e_cur - e_prev) < options.secant_tol * max(1.0, abs(e_cur)):
            logger.debug(f"Eigenvalue {e_cur:.12g} from seed {E_seed} in {iteration} secant steps")
            return EigenResult(None, e_cur, abs(w_cur), path, iteration, evaluations)

    raise SolverError(f"secant from seed {E_seed} did not converge in {options.max_iter} iterations",
                      last=e_cur, iterations=options.max_iter)


def real_axis_brackets(
    spec: PotentialSpec, path: ContourPath, e_lo: float, e_hi: float,
    n_points: int, options: ShootingOptions = ShootingOptions(),
) -> Tuple[List[Tuple[float, float]], float]:
    """
    Real-energy intervals where the phase-adjusted matching function changes sign.

    On a PT-symmetric path W(E) has a constant phase for real E; that phase is
    estimated from the samples and removed before looking for sign changes.
    """
    grid = np.linspace(e_lo, e_hi, n_points)
    values = np.array([matching_function(spec, E, path, options) for E in grid])
    phase = 0.5 * float(np.angle(np.sum(values ** 2)))
    real = (values * np.exp(-1j * phase)).real
    brackets = [
        (float(grid[i]), float(grid[i + 1]))
        for i in range(n_points - 1)
        if real[i] == 0 or real[i] * real[i + 1] < 0
    ]
    return brackets, phase


def _root_in_bracket(
    spec: PotentialSpec, path: ContourPath, bracket: Tuple[float, float], phase: float,
    options: ShootingOptions,
) -> EigenResult:
    lo, hi = bracket
    try:
        result = find_eigenvalue(spec, path, 0.5 * (lo + hi), options)
        if abs(result.E - 0.5 * (lo + hi)) <= 5 * (hi - lo):
            return result
    except SolverError:
        pass
    rotate = np.exp(-1j * phase)
    root = optimize.brentq(
        lambda e: (matching_function(spec, e, path, options) * rotate).real, lo, hi, xtol=1e-12
    )
    return find_eigenvalue(spec, path, root, options)


def scan_spectrum(
    spec: PotentialSpec,
    path: ContourPath,
    n_max: int,
    seeds: Optional[Sequence[complex]] = None,
    options: ShootingOptions = ShootingOptions(),
    series: Optional[ActionSeries] = None,
) -> SpectrumScan:
    """
    The n_max + 1 lowest eigenvalues, sorted by real part.

    Without explicit seeds, levels n >= 2 start from the energy-expansion
    estimates E_J(n) and the low states come from a real-axis sweep of W(E)
    below E_J(2).
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    path.validate(spec)
    found: List[EigenResult] = []
    warnings: List[str] = []

    def polish(seed: complex, label: str):
        try:
            found.append(find_eigenvalue(spec, path, seed, options))
        except SolverError as e:
            warnings.append(f"{label} seed {seed:.8g} failed: {e}")
            logger.warning(f"Seed {seed:.8g} ({label}) failed for {spec}: {e}")

    if seeds is None:
        series = series or action_series(spec, SEED_ORDER)
        levels = quantization_levels(series, max(n_max, 2))
        b0 = series[0].real
        e_top = levels[2] if levels[2] is not None else (2.5 * spec.hbar / b0) ** (4.0 / 3.0)
        e_bottom = -10.0 * spec.hbar ** (4.0 / 3.0) * abs(spec.quartic) ** (1.0 / 3.0)

        brackets, phase = real_axis_brackets(spec, path, e_bottom, e_top, options.sweep_points, options)
        logger.debug(f"Sweep [{e_bottom:.4g}, {e_top:.4g}] bracketed {len(brackets)} real roots")
        for bracket in brackets:
            try:
                found.append(_root_in_bracket(spec, path, bracket, phase, options))
            except (SolverError, ValueError) as e:
                warnings.append(f"bracket {bracket} failed: {e}")
                logger.warning(f"Bracket {bracket} failed for {spec}: {e}")
        for n in range(2, n_max + 1):
            if levels[n] is not None:
                polish(levels[n], f"E_J({n})")
    else:
        for i, seed in enumerate(seeds):
            polish(complex(seed), f"#{i}")

    distinct: List[EigenResult] = []
    collisions: List[Tuple[complex, complex]] = []
    for result in sorted(found, key=lambda r: (r.E.real, r.E.imag)):
        twin = next(
            (d for d in distinct
             if abs(d.E - result.E) < options.collision_tol * max(1.0, abs(result.E))),
            None,
        )
        if twin is None:
            distinct.append(result)
        else:
            collisions.append((twin.E, result.E))

    if collisions:
        logger.debug(f"{len(collisions)} seeds converged onto already found roots")
    if len(distinct) < n_max + 1:
        message = (f"incomplete scan: {len(distinct)} of {n_max + 1} roots found "
                   f"({[f'{d.E:.8g}' for d in distinct]})")
        warnings.append(message)
        logger.warning(f"{message} for {spec}")

    results = [r.with_index(n) for n, r in enumerate(distinct[:n_max + 1])]
    logger.info(f"Scanned {len(results)} eigenvalues of {spec}")
    return SpectrumScan(results, warnings, collisions)
