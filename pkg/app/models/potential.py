from dataclasses import dataclass

import numpy as np

from app.utils.errors import DomainError


@dataclass(frozen=True)
class PotentialSpec:
    """
    V(x) = quartic*x^4 + linear*x + invsq/x^2 with 2m = 1.

    H = p^2 - g x^4 + a/x^2 is (-g, 0, a); h = p^2 + alpha x^4 + b x is (alpha, b, 0).
    """

    quartic: float
    linear: complex = 0j
    invsq: complex = 0j
    hbar: float = 1.0

    def __post_init__(self):
        if self.quartic == 0 or not np.isfinite(self.quartic):
            raise DomainError(f"quartic coupling must be finite and nonzero, got {self.quartic}")
        if self.hbar <= 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "quartic", float(self.quartic))
        object.__setattr__(self, "linear", complex(self.linear))
        object.__setattr__(self, "invsq", complex(self.invsq))
        object.__setattr__(self, "hbar", float(self.hbar))

    @classmethod
    def non_hermitian(cls, g: float, a: float, hbar: float = 1.0) -> "PotentialSpec":
        return cls(-g, 0j, a, hbar)

    @classmethod
    def hermitian(cls, alpha: float, b: complex, hbar: float = 1.0) -> "PotentialSpec":
        return cls(alpha, b, 0j, hbar)

    @property
    def sigma(self) -> int:
        return 1 if self.quartic > 0 else -1

    @property
    def lam(self) -> float:
        return abs(self.quartic) ** 0.25

    @property
    def is_h_family(self) -> bool:
        return self.sigma == 1 and self.invsq == 0

    @property
    def is_H_family(self) -> bool:
        return self.sigma == -1 and self.linear == 0

    def potential(self, x):
        x = np.asarray(x, dtype=complex)
        v = self.quartic * x ** 4 + self.linear * x
        if self.invsq != 0:
            v = v + self.invsq / x ** 2
        return v

    def __str__(self) -> str:
        return f"V = {self.quartic:g} x^4 + ({self.linear:g}) x + ({self.invsq:g})/x^2, hbar={self.hbar:g}"
