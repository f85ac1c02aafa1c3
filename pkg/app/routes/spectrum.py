from app.models.config import RunConfig
from app.routes import CommandRouter
from app.spectra import scan_spectrum, spectrum_contour
from app.utils.output import CheckRow, CommandResult, split_complex

router = CommandRouter()


@router.command("spectrum", summary="Lowest eigenvalues of one Hamiltonian by complex-contour shooting")
def spectrum(config: RunConfig) -> CommandResult:
    spec = config.potential_spec()
    path, series = spectrum_contour(spec, config.nmax)
    scan = scan_spectrum(spec, path, config.nmax, options=config.shooting_options, series=series)

    missing = config.nmax + 1 - len(scan.results)
    return CommandResult(
        header=["n", "E_re", "E_im", "residual"],
        rows=[[r.n, *split_complex(r.E), r.residual] for r in scan.results],
        results={
            "spec": str(spec),
            "eigenvalues": [r.E for r in scan.results],
            "residuals": [r.residual for r in scan.results],
            "warnings": scan.warnings,
            "collisions": scan.collisions,
        },
        checks=[CheckRow("scan_complete", float(missing), 0.0, scan.complete and missing == 0)],
    )
