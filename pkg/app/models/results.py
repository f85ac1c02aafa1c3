from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from app.models.contour import ContourPath


@dataclass(frozen=True)
class BoundaryValue:
    """(psi, psi') at the match point, up to the overall scale dropped by renormalisation."""

    psi: complex
    dpsi: complex
    evaluations: int

    @property
    def log_derivative(self) -> complex:
        return self.dpsi / self.psi


@dataclass(frozen=True)
class EigenResult:
    n: Optional[int]
    E: complex
    residual: float
    contour: ContourPath = field(repr=False)
    iterations: int = 0
    evaluations: int = 0

    def with_index(self, n: int) -> "EigenResult":
        return replace(self, n=n)


@dataclass
class SpectrumScan:
    results: List[EigenResult]
    warnings: List[str] = field(default_factory=list)
    collisions: List[Tuple[complex, complex]] = field(default_factory=list)

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.E for r in self.results], dtype=complex)

    @property
    def complete(self) -> bool:
        return not self.warnings
