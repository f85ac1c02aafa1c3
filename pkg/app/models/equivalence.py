from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from app.models.potential import PotentialSpec
from app.models.reports import SweepSummary

# Where the two lowest levels of p^2 - x^4 + a/x^2 merge, in units of hbar^2
COALESCENCE_A = -2.76


class Regime(str, Enum):
    HERMITIAN_PARTNER = "HermitianPartner"
    PT_PARTNER = "PTPartner"
    BROKEN = "Broken"


@dataclass(frozen=True)
class EquivalencePair:
    """H = p^2 - g x^4 + a/x^2 and its partner h = p^2 + 4g x^4 + b x."""

    g: float
    a: float
    hbar: float
    b: complex
    H_spec: PotentialSpec
    h_spec: PotentialSpec
    regime: Regime


@dataclass
class SweepResult:
    g: float
    hbar: float
    a_values: np.ndarray
    # one row per a value, levels sorted by (Re E, Im E); NaN where tracking was lost
    eigenvalues: np.ndarray
    coalescence_a: Optional[float] = None
    coalescence_error: Optional[float] = None
    zero_crossing_a: Optional[float] = None
    consistency: List[Tuple[float, float]] = field(default_factory=list)
    lost_at: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    @property
    def n_levels(self) -> int:
        return self.eigenvalues.shape[1]

    def rows_within(self, lo: float, hi: float) -> np.ndarray:
        """Tracked rows with lo < a < hi."""
        mask = (self.a_values > lo) & (self.a_values < hi)
        mask &= np.all(np.isfinite(self.eigenvalues), axis=1)
        return self.eigenvalues[mask]

    def max_imag_between(self, lo: float, hi: float) -> Optional[float]:
        rows = self.rows_within(lo, hi)
        return float(np.abs(rows.imag).max()) if rows.size else None

    def min_real_between(self, lo: float, hi: float) -> Optional[float]:
        rows = self.rows_within(lo, hi)
        return float(rows.real.min()) if rows.size else None

    def conjugate_pair_deviation(self) -> Optional[float]:
        """max |E_0 - conj(E_1)| below the coalescence point."""
        if self.coalescence_a is None:
            return None
        rows = self.rows_within(-np.inf, self.coalescence_a)
        if not rows.size:
            return None
        return float(np.abs(rows[:, 0] - np.conj(rows[:, 1])).max())

    def summary(self, window: Tuple[float, float] = (-2.7, 2.0)) -> SweepSummary:
        lo, hi = window
        scale = self.hbar ** 2
        return SweepSummary(
            g=self.g,
            hbar=self.hbar,
            a_min=float(self.a_values.min()),
            a_max=float(self.a_values.max()),
            steps=len(self.a_values),
            coalescence_a=self.coalescence_a,
            coalescence_error=self.coalescence_error,
            zero_crossing_a=self.zero_crossing_a,
            max_imag_in_real_window=self.max_imag_between(lo * scale, hi * scale),
            min_real_in_positive_window=self.min_real_between(lo * scale, hi * scale),
            consistency_max_deviation=max((d for _, d in self.consistency), default=None),
            conjugate_pair_deviation=self.conjugate_pair_deviation(),
            lost_at=self.lost_at,
            notes=list(self.notes),
        )
