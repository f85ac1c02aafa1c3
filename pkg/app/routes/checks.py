from app.aee import golden_validate
from app.equivalence import (
    coefficient_identity_check,
    hermitian_partner,
    superpotential_check,
    susy_residual_check,
)
from app.models.config import RunConfig
from app.routes import CommandRouter
from app.utils.output import CHECK_HEADER, CheckRow, CommandResult, check_rows

router = CommandRouter()


def _as_table(checks, results, reports) -> CommandResult:
    return CommandResult(
        header=CHECK_HEADER,
        rows=check_rows(checks),
        results=results,
        reports=reports,
        checks=checks,
    )


@router.command("equiv-check", summary="Coefficient identity b_k = beta_k and the closed forms of both families")
def equiv_check(config: RunConfig) -> CommandResult:
    """
    --contour-center/--contour-axes apply to the H side only; the partner
    always uses its own default ellipse.
    """
    pair = hermitian_partner(config.g, config.resolved_a, config.hbar)
    contour_H = config.branch_contour(pair.H_spec.sigma)
    identity = coefficient_identity_check(
        config.g, config.resolved_a, config.hbar, config.resolved_kmax, contour_H=contour_H,
    )
    golden_H = golden_validate(pair.H_spec, contour_H)
    golden_h = golden_validate(pair.h_spec)

    checks = [
        CheckRow("coefficient_identity", identity.max_deviation, identity.tolerance, identity.passed),
        CheckRow("golden_values_H", golden_H.max_deviation, golden_H.tolerance, golden_H.passed),
        CheckRow("golden_values_h", golden_h.max_deviation, golden_h.tolerance, golden_h.passed),
    ]
    results = {"g": pair.g, "a": pair.a, "b": pair.b, "hbar": pair.hbar, "regime": pair.regime.value}
    reports = {"coefficient_identity": identity, "golden_H": golden_H, "golden_h": golden_h}
    return _as_table(checks, results, reports)


@router.command("susy-check", summary="Zero-energy ground states and superpotentials of H1 and H2")
def susy_check(config: RunConfig) -> CommandResult:
    susy = susy_residual_check(options=config.shooting_options)
    superpotential = superpotential_check()
    energy_H1 = abs(complex(susy.ground_energy_H1_re, susy.ground_energy_H1_im))
    energy_H2 = abs(complex(susy.ground_energy_H2_re, susy.ground_energy_H2_im))
    worst_w = max(
        superpotential.closed_form_H1, superpotential.closed_form_H2, superpotential.antisymmetry,
        superpotential.partner_minus_H1, superpotential.partner_plus_H1,
        superpotential.partner_minus_H2, superpotential.partner_plus_H2,
    )
    log_derivative = max(susy.log_derivative_phi1, susy.log_derivative_phi2)

    checks = [
        CheckRow("residual_phi1", susy.residual_phi1, susy.residual_tolerance,
                 susy.residual_phi1 <= susy.residual_tolerance),
        CheckRow("residual_phi2", susy.residual_phi2, susy.residual_tolerance,
                 susy.residual_phi2 <= susy.residual_tolerance),
        CheckRow("log_derivative", log_derivative, 1e-8, log_derivative <= 1e-8),
        CheckRow("ground_energy_H1", energy_H1, susy.energy_tolerance, energy_H1 <= susy.energy_tolerance),
        CheckRow("ground_energy_H2", energy_H2, susy.energy_tolerance, energy_H2 <= susy.energy_tolerance),
        CheckRow("superpotentials", worst_w, superpotential.tolerance, superpotential.passed),
    ]
    return _as_table(checks, {}, {"susy": susy, "superpotential": superpotential})
