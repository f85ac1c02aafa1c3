from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from app.models.potential import PotentialSpec
from app.utils.errors import PathError

# Closest approach to x = 0 allowed when the inverse-square term is present
ORIGIN_CLEARANCE = 0.05
# |cos| of the asymptotic phase on a ray; zero means an anti-Stokes line
SECTOR_MARGIN = 0.05

Leg = Tuple[complex, ...]


def _on_segment(z: complex, p: complex, q: complex, tol: float = 1e-12) -> bool:
    span = q - p
    if span == 0:
        return abs(z - p) <= tol
    t = ((z - p) * np.conj(span)).real / abs(span) ** 2
    return -tol <= t <= 1 + tol and abs(p + t * span - z) <= tol * max(1.0, abs(span))


def _distance_to_origin(p: complex, q: complex) -> float:
    span = q - p
    if span == 0:
        return abs(p)
    t = min(1.0, max(0.0, (-p * np.conj(span)).real / abs(span) ** 2))
    return abs(p + t * span)


def _dedupe(points: Sequence[complex]) -> Leg:
    out = [points[0]]
    for z in points[1:]:
        if abs(z - out[-1]) > 1e-14:
            out.append(z)
    return tuple(out)


@dataclass(frozen=True)
class ContourPath:
    """
    Polyline in the complex x-plane from the entry ray endpoint through the
    waypoints to the exit ray endpoint; rays are (angle, radius).
    """

    entry_ray: Tuple[float, float]
    exit_ray: Tuple[float, float]
    waypoints: Tuple[complex, ...]
    match_point: complex

    @property
    def entry_point(self) -> complex:
        angle, radius = self.entry_ray
        return complex(radius * np.exp(1j * angle))

    @property
    def exit_point(self) -> complex:
        angle, radius = self.exit_ray
        return complex(radius * np.exp(1j * angle))

    @property
    def vertices(self) -> Leg:
        return (self.entry_point, *self.waypoints, self.exit_point)

    def segments(self) -> Tuple[Tuple[complex, complex], ...]:
        verts = self.vertices
        return tuple(zip(verts[:-1], verts[1:]))

    def legs(self) -> Tuple[Leg, Leg]:
        """Vertex lists from each ray endpoint to the match point."""
        verts = self.vertices
        for i, (p, q) in enumerate(self.segments()):
            if _on_segment(self.match_point, p, q):
                left = _dedupe(verts[:i + 1] + (self.match_point,))
                right = _dedupe(verts[i + 1:][::-1] + (self.match_point,))
                return left, right
        raise PathError(f"match point {self.match_point} does not lie on the path")

    def sample(self, n: int) -> np.ndarray:
        """n points spread uniformly in arc length, endpoints included."""
        verts = np.array(self.vertices)
        arc = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(verts)))))
        s = np.linspace(0.0, arc[-1], n)
        return np.interp(s, arc, verts.real) + 1j * np.interp(s, arc, verts.imag)

    def perturbed(self, offsets: Sequence[complex]) -> "ContourPath":
        if len(offsets) != len(self.waypoints):
            raise PathError(f"expected {len(self.waypoints)} offsets, got {len(offsets)}")
        match = self.match_point
        for point, offset in zip(self.waypoints, offsets):
            if abs(point - match) < 1e-14:
                match = point + offset
        moved = tuple(p + d for p, d in zip(self.waypoints, offsets))
        return ContourPath(self.entry_ray, self.exit_ray, moved, match)

    def validate(self, spec: PotentialSpec) -> "ContourPath":
        self.legs()
        if spec.invsq != 0:
            closest = min(_distance_to_origin(p, q) for p, q in self.segments())
            if closest < ORIGIN_CLEARANCE:
                raise PathError(f"path passes within {closest:.3g} of the x = 0 pole")
        root = np.sqrt(complex(spec.quartic))
        for angle, _ in (self.entry_ray, self.exit_ray):
            margin = abs((root * np.exp(3j * angle)).real) / abs(root)
            if margin < SECTOR_MARGIN:
                raise PathError(f"ray at angle {angle:.4f} lies on an anti-Stokes line")
        return self
