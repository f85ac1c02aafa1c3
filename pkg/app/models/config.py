from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.models.potential import PotentialSpec
from app.models.series import MIN_POINTS, BranchContour
from app.spectra import ShootingOptions

COMMANDS = ("coeffs", "spectrum", "table1", "table2", "figure1", "equiv-check", "susy-check")

# a of H = p^2 - g x^4 + a/x^2 when --a is omitted
DEFAULT_A = {"table1": 6.0, "table2": -0.5}
FALLBACK_A = 6.0

DEFAULT_KMAX = {"equiv-check": 60}
FALLBACK_KMAX = 30


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Literal["coeffs", "spectrum", "table1", "table2", "figure1", "equiv-check", "susy-check"]
    g: float = 1.0
    a: Optional[float] = None
    b: Optional[complex] = None
    hbar: float = 1.0
    kmax: Optional[int] = None
    nmax: int = 10
    steps: int = 141
    a_min: float = -4.0
    a_max: float = 3.0
    contour_center: Optional[complex] = None
    contour_axes: Optional[Tuple[float, float]] = None
    n_points: int = 4096
    rk_tol: float = 1e-12
    secant_tol: float = 1e-10
    out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    log_file: Optional[str] = None
    verbosity: int = 0

    @field_validator("g", "hbar", "rk_tol", "secant_tol")
    @classmethod
    def must_be_positive(cls, v: float, info) -> float:
        if not v > 0:
            raise ValueError(f"{info.field_name} must be positive, got {v}")
        return v

    @field_validator("kmax", "nmax")
    @classmethod
    def must_be_non_negative(cls, v: Optional[int], info) -> Optional[int]:
        if v is not None and v < 0:
            raise ValueError(f"{info.field_name} must be >= 0, got {v}")
        return v

    @field_validator("steps")
    @classmethod
    def enough_steps(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"steps must be >= 2, got {v}")
        return v

    @field_validator("n_points")
    @classmethod
    def enough_points(cls, v: int) -> int:
        if v < MIN_POINTS:
            raise ValueError(f"n_points must be >= {MIN_POINTS}, got {v}")
        return v

    @field_validator("contour_axes")
    @classmethod
    def positive_axes(cls, v: Optional[Tuple[float, float]]) -> Optional[Tuple[float, float]]:
        if v is not None and min(v) <= 0:
            raise ValueError(f"contour semi-axes must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def check_command_parameters(self) -> "RunConfig":
        if not self.a_min < self.a_max:
            raise ValueError(f"a_min must be below a_max, got {self.a_min} >= {self.a_max}")
        if self.b is not None and self.a is not None:
            raise ValueError("give either --a (H family) or --b (h family), not both")
        if self.b is not None and self.command in ("table1", "table2", "figure1", "equiv-check", "susy-check"):
            raise ValueError(f"{self.command} derives b from a; --b is not accepted")
        return self

    @property
    def resolved_a(self) -> float:
        return self.a if self.a is not None else DEFAULT_A.get(self.command, FALLBACK_A)

    @property
    def resolved_kmax(self) -> int:
        return self.kmax if self.kmax is not None else DEFAULT_KMAX.get(self.command, FALLBACK_KMAX)

    def potential_spec(self) -> PotentialSpec:
        """h = p^2 + 4g x^4 + b x when --b is given, else H = p^2 - g x^4 + a/x^2."""
        if self.b is not None:
            return PotentialSpec.hermitian(4 * self.g, self.b, self.hbar)
        return PotentialSpec.non_hermitian(self.g, self.resolved_a, self.hbar)

    @property
    def shooting_options(self) -> ShootingOptions:
        return ShootingOptions(rtol=self.rk_tol, atol=self.rk_tol * 1e-2, secant_tol=self.secant_tol)

    def branch_contour(self, sigma: int) -> BranchContour:
        default = BranchContour.default(sigma, self.n_points)
        return BranchContour(
            self.contour_center if self.contour_center is not None else default.center,
            self.contour_axes if self.contour_axes is not None else default.semi_axes,
            0.0,
            self.n_points,
        )
