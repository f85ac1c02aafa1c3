"""
Laurent polynomials in y and algebraic terms N(y) * D(y)^(-m/2), D(y) = 1 - sigma*y^4.

These are the building blocks of the Riccati recurrence coefficients a_k(y).
A LaurentPoly is stored the dense way (valuation offset plus an ascending
coefficient array) and exposes the sparse {power: coefficient} view through
``coeffs``. Everything here is immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import special

from app.utils.errors import DomainError

Scalar = Union[int, float, complex]

# Coefficients below this fraction of the largest one are rounding debris
ZERO_CUTOFF = 1e-14


class LaurentPoly:
    """Finite Laurent polynomial sum_n c_n y^n with complex coefficients."""

    __slots__ = ("_offset", "_c")

    def __init__(self, coefficients: Optional[Mapping[int, Scalar]] = None):
        if not coefficients:
            self._offset, self._c = 0, _frozen(np.zeros(0, dtype=complex))
            return
        low, high = min(coefficients), max(coefficients)
        dense = np.zeros(high - low + 1, dtype=complex)
        for power, value in coefficients.items():
            dense[power - low] += value
        self._offset, self._c = _canonical(dense, low)

    @classmethod
    def from_dense(cls, dense: Iterable[Scalar], offset: int = 0) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._offset, poly._c = _canonical(np.asarray(dense, dtype=complex), offset)
        return poly

    @classmethod
    def monomial(cls, power: int, value: Scalar = 1.0) -> "LaurentPoly":
        return cls({power: value})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1.0})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    # -- views -------------------------------------------------------------
    @property
    def dense(self) -> np.ndarray:
        return self._c

    @property
    def offset(self) -> int:
        return self._offset

    @property
    def coeffs(self) -> dict:
        return {self._offset + i: complex(c) for i, c in enumerate(self._c) if c != 0}

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def valuation(self) -> Optional[int]:
        return None if self.is_zero else self._offset

    @property
    def degree(self) -> Optional[int]:
        return None if self.is_zero else self._offset + self._c.size - 1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        low = min(self._offset, other._offset)
        high = max(self.degree, other.degree)
        dense = np.zeros(high - low + 1, dtype=complex)
        dense[self._offset - low:self._offset - low + self._c.size] += self._c
        dense[other._offset - low:other._offset - low + other._c.size] += other._c
        return LaurentPoly.from_dense(dense, low)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly.from_dense(-self._c, self._offset)

    def __sub__(self, other) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "LaurentPoly":
        return LaurentPoly.from_dense(self._c * factor, self._offset)

    def shift(self, power: int) -> "LaurentPoly":
        """Multiply by y**power."""
        if self.is_zero:
            return self
        return LaurentPoly.from_dense(self._c, self._offset + power)

    def diff(self) -> "LaurentPoly":
        return lp_diff(self)

    def __call__(self, y):
        y = np.asarray(y, dtype=complex)
        if self.is_zero:
            return np.zeros_like(y)
        return np.polynomial.polynomial.polyval(y, self._c) * y ** self._offset

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._offset == other._offset and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((self._offset, self._c.tobytes()))

    def __repr__(self) -> str:
        terms = " + ".join(f"({c:.6g})*y^{p}" for p, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({terms or '0'})"


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _canonical(dense: np.ndarray, offset: int) -> Tuple[int, np.ndarray]:
    dense = np.array(dense, dtype=complex)
    if dense.size == 0:
        return 0, _frozen(dense)
    magnitude = np.abs(dense)
    top = magnitude.max()
    if top == 0:
        return 0, _frozen(np.zeros(0, dtype=complex))
    if np.isfinite(top):
        dense[magnitude < ZERO_CUTOFF * top] = 0
    nonzero = np.flatnonzero(dense)
    first, last = nonzero[0], nonzero[-1]
    return offset + int(first), _frozen(dense[first:last + 1])


def _as_poly(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, float, complex, np.number)):
        return LaurentPoly({0: value}) if value != 0 else LaurentPoly.zero()
    return NotImplemented


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if p.is_zero or q.is_zero:
        return LaurentPoly.zero()
    return LaurentPoly.from_dense(np.convolve(p.dense, q.dense), p.offset + q.offset)


def lp_diff(p: LaurentPoly) -> LaurentPoly:
    if p.is_zero:
        return p
    powers = np.arange(p.offset, p.offset + p.dense.size)
    return LaurentPoly.from_dense(p.dense * powers, p.offset - 1)


@lru_cache(maxsize=None)
def weight(sigma: int) -> LaurentPoly:
    """D(y) = 1 - sigma*y^4."""
    return LaurentPoly({0: 1.0, 4: -sigma})


@lru_cache(maxsize=None)
def weight_power(sigma: int, power: int) -> LaurentPoly:
    if power == 0:
        return LaurentPoly.one()
    return lp_mul(weight_power(sigma, power - 1), weight(sigma))


def weight_values(sigma: int, y):
    y = np.asarray(y, dtype=complex)
    return 1.0 - sigma * y ** 4


@dataclass(frozen=True)
class AlgebraicTerm:
    """num(y) * D(y)^(-m/2); m counts half powers of D."""

    num: LaurentPoly
    m: int
    sigma: int

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise DomainError(f"sigma must be +1 or -1, got {self.sigma}")

    @classmethod
    def zero(cls, sigma: int) -> "AlgebraicTerm":
        return cls(LaurentPoly.zero(), 0, sigma)

    @classmethod
    def constant(cls, value: Scalar, sigma: int) -> "AlgebraicTerm":
        return cls(LaurentPoly({0: value}), 0, sigma)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def scale(self, factor: Scalar) -> "AlgebraicTerm":
        return replace(self, num=self.num.scale(factor))

    def shift(self, power: int) -> "AlgebraicTerm":
        return replace(self, num=self.num.shift(power))

    def over_root(self) -> "AlgebraicTerm":
        """Divide by D^(1/2)."""
        return replace(self, m=self.m + 1)

    def pad(self, m: int) -> "AlgebraicTerm":
        """Same function written over D^(-m/2), m >= self.m of equal parity."""
        delta = m - self.m
        if delta < 0 or delta % 2:
            raise DomainError(f"cannot pad m={self.m} to m={m}")
        if delta == 0:
            return self
        return AlgebraicTerm(lp_mul(self.num, weight_power(self.sigma, delta // 2)), m, self.sigma)

    def __call__(self, y, root=None):
        """Evaluate at y; ``root`` carries the tracked D(y)^(1/2) branch."""
        if root is None:
            root = np.sqrt(weight_values(self.sigma, y))
        return self.num(y) * np.asarray(root, dtype=complex) ** (-self.m)

    def __add__(self, other: "AlgebraicTerm") -> "AlgebraicTerm":
        return at_add(self, other)

    def __mul__(self, other: "AlgebraicTerm") -> "AlgebraicTerm":
        return at_mul(self, other)

    def diff(self) -> "AlgebraicTerm":
        return at_diff(self)


def _check_sigma(u: AlgebraicTerm, v: AlgebraicTerm):
    if u.sigma != v.sigma:
        raise DomainError(f"sigma mismatch: {u.sigma} vs {v.sigma}")


def at_mul(u: AlgebraicTerm, v: AlgebraicTerm) -> AlgebraicTerm:
    _check_sigma(u, v)
    return AlgebraicTerm(lp_mul(u.num, v.num), u.m + v.m, u.sigma)


def at_diff(u: AlgebraicTerm) -> AlgebraicTerm:
    # d/dy [N D^(-m/2)] = [N' D - (m/2) N D'] D^(-(m/2 + 1))
    d = weight(u.sigma)
    d_prime = LaurentPoly.monomial(3, -4.0 * u.sigma)
    num = lp_mul(lp_diff(u.num), d) - lp_mul(u.num, d_prime).scale(u.m / 2)
    return AlgebraicTerm(num, u.m + 2, u.sigma)


def at_add(u: AlgebraicTerm, v: AlgebraicTerm) -> AlgebraicTerm:
    _check_sigma(u, v)
    if v.is_zero:
        return u
    if u.is_zero:
        return v
    if (u.m - v.m) % 2:
        raise DomainError(f"cannot add terms with m={u.m} and m={v.m}")
    m = max(u.m, v.m)
    return AlgebraicTerm(u.pad(m).num + v.pad(m).num, m, u.sigma)


@dataclass(frozen=True)
class AlgebraicSum:
    """
    Sum of at most two AlgebraicTerms of opposite m parity.

    Terms with a D^(1/2) factor and terms without one cannot share a
    numerator; the linear coupling B*x puts both kinds into a_3 onward.
    """

    parts: Tuple[AlgebraicTerm, ...]
    sigma: int

    @classmethod
    def of(cls, *terms: AlgebraicTerm, sigma: Optional[int] = None) -> "AlgebraicSum":
        if sigma is None:
            if not terms:
                raise DomainError("sigma is required for an empty sum")
            sigma = terms[0].sigma
        by_parity = {}
        for term in terms:
            if term.sigma != sigma:
                raise DomainError(f"sigma mismatch: {term.sigma} vs {sigma}")
            if term.is_zero:
                continue
            parity = term.m % 2
            by_parity[parity] = at_add(by_parity[parity], term) if parity in by_parity else term
        parts = tuple(
            sorted((t for t in by_parity.values() if not t.is_zero), key=lambda t: -t.m)
        )
        return cls(parts, sigma)

    @classmethod
    def zero(cls, sigma: int) -> "AlgebraicSum":
        return cls((), sigma)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    @property
    def m_values(self) -> Tuple[int, ...]:
        return tuple(t.m for t in self.parts)

    def __add__(self, other: Union["AlgebraicSum", AlgebraicTerm]) -> "AlgebraicSum":
        other_parts = (other,) if isinstance(other, AlgebraicTerm) else other.parts
        return AlgebraicSum.of(*self.parts, *other_parts, sigma=self.sigma)

    def __mul__(self, other: "AlgebraicSum") -> "AlgebraicSum":
        products = [at_mul(u, v) for u in self.parts for v in other.parts]
        return AlgebraicSum.of(*products, sigma=self.sigma)

    def diff(self) -> "AlgebraicSum":
        return AlgebraicSum.of(*(at_diff(t) for t in self.parts), sigma=self.sigma)

    def scale(self, factor: Scalar) -> "AlgebraicSum":
        return AlgebraicSum.of(*(t.scale(factor) for t in self.parts), sigma=self.sigma)

    def shift(self, power: int) -> "AlgebraicSum":
        return AlgebraicSum(tuple(t.shift(power) for t in self.parts), self.sigma)

    def over_root(self) -> "AlgebraicSum":
        return AlgebraicSum(tuple(t.over_root() for t in self.parts), self.sigma)

    def __call__(self, y, root=None):
        y = np.asarray(y, dtype=complex)
        total = np.zeros_like(y)
        for term in self.parts:
            total = total + term(y, root)
        return total


def gamma_fn(z: float) -> float:
    if isinstance(z, complex) or z <= 0:
        raise DomainError(f"gamma_fn needs a positive real argument, got {z}")
    return float(special.gamma(float(z)))
