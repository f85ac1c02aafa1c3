from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from app.models.potential import PotentialSpec
from app.utils.errors import ContourError

MIN_POINTS = 256


@dataclass(frozen=True)
class BranchContour:
    """Counter-clockwise ellipse in the rescaled y-plane."""

    center: complex
    semi_axes: Tuple[float, float]
    rotation: float = 0.0
    n_points: int = 4096

    @classmethod
    def default(cls, sigma: int, n_points: int = 4096) -> "BranchContour":
        if sigma == -1:
            return cls(1j / np.sqrt(2.0), (1.05, 0.35), 0.0, n_points)
        return cls(0j, (1.3, 0.4), 0.0, n_points)

    @staticmethod
    def branch_points(sigma: int) -> Tuple[np.ndarray, np.ndarray]:
        """(enclosed, excluded) roots of D(y) = 1 - sigma*y^4."""
        if sigma == -1:
            enclosed = np.exp(1j * np.pi * np.array([0.25, 0.75]))
            excluded = np.exp(-1j * np.pi * np.array([0.25, 0.75]))
            return enclosed, np.append(excluded, 0j)
        return np.array([1.0 + 0j, -1.0 + 0j]), np.array([1j, -1j])

    def contains(self, points) -> np.ndarray:
        z = (np.asarray(points, dtype=complex) - self.center) * np.exp(-1j * self.rotation)
        a, b = self.semi_axes
        return (z.real / a) ** 2 + (z.imag / b) ** 2 < 1.0

    def validate(self, sigma: int) -> "BranchContour":
        if self.n_points < MIN_POINTS:
            raise ContourError(f"branch contour needs at least {MIN_POINTS} points, got {self.n_points}")
        if min(self.semi_axes) <= 0:
            raise ContourError(f"semi-axes must be positive, got {self.semi_axes}")
        enclosed, excluded = self.branch_points(sigma)
        if not self.contains(enclosed).all():
            raise ContourError(f"contour {self} does not enclose both branch points {enclosed}")
        if self.contains(excluded).any():
            raise ContourError(f"contour {self} encloses an excluded singularity of {excluded}")
        return self

    def sample(self) -> Tuple[np.ndarray, np.ndarray]:
        """Points y(t) and y'(t) on the uniform grid t_j = 2*pi*j/N."""
        t = 2.0 * np.pi * np.arange(self.n_points) / self.n_points
        a, b = self.semi_axes
        turn = np.exp(1j * self.rotation)
        y = self.center + turn * (a * np.cos(t) + 1j * b * np.sin(t))
        dy = turn * (-a * np.sin(t) + 1j * b * np.cos(t))
        return y, dy


@dataclass(frozen=True)
class ActionSeries:
    """
    Coefficients of J(E) = sum_k b_k E^(-(k-3)/4), k = 0..K.

    ``magnitudes[k]`` is (1/2 pi lam) times the integral of |a_k||dy| along the
    quadrature path; ``errors[k]`` estimates the absolute quadrature error of
    b_k from the half-step rule plus accumulated rounding.
    """

    coeffs: np.ndarray = field(compare=False)
    K: int
    spec: PotentialSpec
    magnitudes: np.ndarray = field(compare=False, repr=False)
    errors: np.ndarray = field(compare=False, repr=False)

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k]) if 0 <= k <= self.K else 0j

    def __len__(self) -> int:
        return self.K + 1

    def nonzero(self) -> List[int]:
        return [k for k in range(self.K + 1) if self.coeffs[k] != 0]
