from app.aee import GOLDEN_ORDERS, action_series, golden_validate
from app.models.config import RunConfig
from app.routes import CommandRouter
from app.utils.logging import logger
from app.utils.output import CheckRow, CommandResult, split_complex

router = CommandRouter()


@router.command("coeffs", summary="Action-series coefficients b_k and their closed-form deviations")
def coeffs(config: RunConfig) -> CommandResult:
    """
    b_0..b_kmax of H (or beta_k of h when --b is given) by contour quadrature.

    Orders with a closed form carry it and the relative deviation; the
    golden-value report is attached as a check.
    """
    spec = config.potential_spec()
    contour = config.branch_contour(spec.sigma)
    series = action_series(spec, config.resolved_kmax, contour)
    report = golden_validate(spec, contour)
    golden = {e.k: e for e in report.entries}

    rows = []
    for k in range(series.K + 1):
        closed = ["", "", ""]
        if k in golden:
            e = golden[k]
            closed = [e.closed_form_re, e.closed_form_im, e.rel_deviation]
        rows.append([k, *split_complex(series[k], snap=False), *closed])

    logger.info(f"Computed {series.K + 1} coefficients for {spec}; nonzero at {series.nonzero()}")
    return CommandResult(
        header=["k", "b_k_re", "b_k_im", "closed_re", "closed_im", "rel_dev"],
        rows=rows,
        results={
            "spec": str(spec),
            "coefficients": [complex(c) for c in series.coeffs],
            "magnitudes": series.magnitudes,
            "errors": series.errors,
            "golden_orders": list(GOLDEN_ORDERS),
        },
        reports={"golden": report},
        checks=[CheckRow("golden_values", report.max_deviation, report.tolerance, report.passed)],
    )
