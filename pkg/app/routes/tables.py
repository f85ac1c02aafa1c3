import math

from app.aee import action_series, quantization_levels
from app.equivalence import hermitian_partner, isospectrality_check
from app.models.config import RunConfig
from app.routes import CommandRouter
from app.utils.logging import logger
from app.utils.output import CheckRow, CommandResult, split_complex

router = CommandRouter()

TABLE_HEADER = ["n", "E_H_re", "E_H_im", "E_h_re", "E_h_im", "E_J"]


def _equivalence_table(config: RunConfig) -> CommandResult:
    """
    Eigenvalues of H and of its partner h side by side, with the
    energy-expansion estimate E_J(n) from the truncated action series.
    """
    pair = hermitian_partner(config.g, config.resolved_a, config.hbar)
    report = isospectrality_check(pair, config.nmax, config.shooting_options)
    series = action_series(pair.H_spec, config.resolved_kmax, config.branch_contour(pair.H_spec.sigma))
    levels = quantization_levels(series, config.nmax)

    by_n = {r.n: r for r in report.rows}
    rows = []
    for n in range(config.nmax + 1):
        E_J = levels[n] if levels[n] is not None else math.nan
        r = by_n.get(n)
        if r is None:
            rows.append([n, math.nan, math.nan, math.nan, math.nan, E_J])
            continue
        rows.append([
            n,
            *split_complex(complex(r.E_H_re, r.E_H_im)),
            *split_complex(complex(r.E_h_re, r.E_h_im)),
            E_J,
        ])

    for warning in report.warnings:
        logger.warning(warning)
    return CommandResult(
        header=TABLE_HEADER,
        rows=rows,
        results={
            "g": pair.g,
            "a": pair.a,
            "b": pair.b,
            "hbar": pair.hbar,
            "regime": pair.regime.value,
            "E_J": [E if E is not None else math.nan for E in levels],
        },
        reports={"isospectrality": report},
        checks=[CheckRow("isospectrality", report.max_rel_difference, report.tolerance, report.passed)],
    )


@router.command("table1", summary="H = p^2 - x^4 + 6/x^2 against h = p^2 + 4x^4 + 10x")
def table1(config: RunConfig) -> CommandResult:
    return _equivalence_table(config)


@router.command("table2", summary="H = p^2 - x^4 - 1/(2x^2) against h = p^2 + 4x^4 + 2ix")
def table2(config: RunConfig) -> CommandResult:
    return _equivalence_table(config)
