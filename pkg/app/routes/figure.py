import math
from typing import Optional

from app.equivalence import pt_transition_scan
from app.models.config import RunConfig
from app.models.equivalence import COALESCENCE_A
from app.routes import CommandRouter
from app.utils.output import CheckRow, CommandResult, format_value, split_complex

router = CommandRouter()

COALESCENCE_TOL = 0.05
ZERO_CROSSING_TOL = 1e-3
REAL_WINDOW_TOL = 1e-7
CONJUGATE_TOL = 1e-8
CONSISTENCY_TOL = 2e-6


def _gap(value: Optional[float], target: float = 0.0) -> float:
    return math.inf if value is None else abs(value - target)


@router.command("figure1", summary="Six lowest levels of H across a, with the coalescence point")
def figure1(config: RunConfig) -> CommandResult:
    sweep = pt_transition_scan(
        config.g, config.hbar, (config.a_min, config.a_max), config.steps, options=config.shooting_options,
    )
    summary = sweep.summary()
    scale = config.hbar ** 2

    header = ["a"]
    for level in range(sweep.n_levels):
        header += [f"E{level}_re", f"E{level}_im"]
    rows = []
    for a, levels in zip(sweep.a_values, sweep.eigenvalues):
        row = [float(a)]
        for E in levels:
            row += split_complex(E)
        rows.append(row)

    comment = " ".join(
        f"{name}={format_value(value) if value is not None else 'none'}"
        for name, value in (
            ("coalescence_a", summary.coalescence_a),
            ("coalescence_error", summary.coalescence_error),
            ("zero_crossing_a", summary.zero_crossing_a),
        )
    )
    checks = [
        CheckRow("coalescence", _gap(summary.coalescence_a, COALESCENCE_A * scale), COALESCENCE_TOL,
                 _gap(summary.coalescence_a, COALESCENCE_A * scale) <= COALESCENCE_TOL),
        CheckRow("zero_crossing", _gap(summary.zero_crossing_a, 2.0 * scale), ZERO_CROSSING_TOL,
                 _gap(summary.zero_crossing_a, 2.0 * scale) <= ZERO_CROSSING_TOL),
        CheckRow("real_window", _gap(summary.max_imag_in_real_window), REAL_WINDOW_TOL,
                 _gap(summary.max_imag_in_real_window) <= REAL_WINDOW_TOL),
        CheckRow("conjugate_pairs", _gap(summary.conjugate_pair_deviation), CONJUGATE_TOL,
                 _gap(summary.conjugate_pair_deviation) <= CONJUGATE_TOL),
        CheckRow("h_side_consistency", _gap(summary.consistency_max_deviation), CONSISTENCY_TOL,
                 _gap(summary.consistency_max_deviation) <= CONSISTENCY_TOL),
        CheckRow("tracking", 0.0 if summary.lost_at is None else 1.0, 0.0, summary.lost_at is None),
    ]
    return CommandResult(
        header=header,
        rows=rows,
        results={"a": sweep.a_values, "eigenvalues": sweep.eigenvalues, "consistency": sweep.consistency},
        reports={"sweep": summary},
        checks=checks,
        comments=[comment],
    )
