import numpy as np
import pytest

from app.seriesalg import (
    AlgebraicSum,
    AlgebraicTerm,
    LaurentPoly,
    at_add,
    at_diff,
    at_mul,
    gamma_fn,
    weight_power,
)
from app.utils.errors import DomainError

Y = np.array([0.3 + 0.2j, -0.4 + 0.1j, 0.25 - 0.35j])


class TestLaurentPoly:
    """Canonical form, arithmetic and evaluation."""

    def test_canonical_form_drops_zeros(self):
        p = LaurentPoly({-2: 0.0, 1: 3.0, 4: 0.0})
        assert p.valuation == 1
        assert p.degree == 1
        assert p.coeffs == {1: 3.0}

    def test_zero(self):
        z = LaurentPoly.zero()
        assert z.is_zero
        assert z.degree is None and z.valuation is None
        assert (LaurentPoly({3: 2.0}) - LaurentPoly({3: 2.0})).is_zero

    def test_product_of_conjugate_binomials(self):
        """(1 + y)(1 - y) = 1 - y^2."""
        p = LaurentPoly({0: 1, 1: 1}) * LaurentPoly({0: 1, 1: -1})
        assert p == LaurentPoly({0: 1, 2: -1})

    def test_negative_powers_multiply(self):
        assert LaurentPoly.monomial(-2) * LaurentPoly.monomial(3) == LaurentPoly.monomial(1)

    def test_diff(self):
        """d/dy (1/y + 2y^3) = -1/y^2 + 6y^2."""
        p = LaurentPoly({-1: 1, 3: 2})
        assert p.diff() == LaurentPoly({-2: -1, 2: 6})

    def test_diff_of_constant_is_zero(self):
        assert LaurentPoly.one().diff().is_zero

    def test_shift_and_scale(self):
        p = LaurentPoly({0: 1, 2: 1})
        assert p.shift(-3) == LaurentPoly({-3: 1, -1: 1})
        assert (2 * p) == p.scale(2) == LaurentPoly({0: 2, 2: 2})

    def test_scalar_addition(self):
        assert LaurentPoly.monomial(2) + 1 == LaurentPoly({0: 1, 2: 1})
        assert 1 - LaurentPoly.monomial(2) == LaurentPoly({0: 1, 2: -1})

    def test_evaluation_matches_direct_sum(self):
        p = LaurentPoly({-1: 0.5, 0: 1j, 3: -2})
        expected = 0.5 / Y + 1j - 2 * Y ** 3
        np.testing.assert_allclose(p(Y), expected, rtol=1e-14)

    def test_equal_polys_hash_equal(self):
        assert hash(LaurentPoly({1: 2.0})) == hash(LaurentPoly.monomial(1, 2.0))

    def test_dense_view_is_read_only(self):
        p = LaurentPoly({0: 1, 1: 2})
        with pytest.raises(ValueError):
            p.dense[0] = 5


class TestAlgebraicTerm:
    """N(y) D(y)^(-m/2) with D = 1 - sigma y^4."""

    @pytest.mark.parametrize("sigma", [1, -1])
    def test_derivative_matches_finite_difference(self, sigma):
        u = AlgebraicTerm(LaurentPoly({2: 1.0, 5: -0.5}), 3, sigma)
        h = 1e-6
        numeric = (u(Y + h) - u(Y - h)) / (2 * h)
        np.testing.assert_allclose(at_diff(u)(Y), numeric, rtol=1e-7)

    def test_derivative_raises_m_by_two(self):
        assert at_diff(AlgebraicTerm(LaurentPoly.one(), 1, -1)).m == 3

    def test_product_adds_m(self):
        u = AlgebraicTerm(LaurentPoly.monomial(1), 1, -1)
        v = AlgebraicTerm(LaurentPoly.monomial(2), 2, -1)
        w = at_mul(u, v)
        assert w.m == 3
        np.testing.assert_allclose(w(Y), u(Y) * v(Y), rtol=1e-13)

    def test_add_pads_to_the_larger_m(self):
        u = AlgebraicTerm(LaurentPoly.one(), 0, -1)
        v = AlgebraicTerm(LaurentPoly.monomial(1), 2, -1)
        w = at_add(u, v)
        assert w.m == 2
        np.testing.assert_allclose(w(Y), u(Y) + v(Y), rtol=1e-13)

    def test_add_with_odd_difference_raises(self):
        with pytest.raises(DomainError):
            at_add(AlgebraicTerm(LaurentPoly.one(), 0, 1), AlgebraicTerm(LaurentPoly.one(), 1, 1))

    def test_sigma_mismatch_raises(self):
        with pytest.raises(DomainError):
            at_mul(AlgebraicTerm(LaurentPoly.one(), 0, 1), AlgebraicTerm(LaurentPoly.one(), 0, -1))

    def test_invalid_sigma(self):
        with pytest.raises(DomainError):
            AlgebraicTerm(LaurentPoly.one(), 0, 2)

    def test_pad_keeps_values(self):
        u = AlgebraicTerm(LaurentPoly({1: 2.0}), 1, 1)
        np.testing.assert_allclose(u.pad(5)(Y), u(Y), rtol=1e-13)
        with pytest.raises(DomainError):
            u.pad(2)

    def test_weight_power(self):
        """D^2 = 1 - 2 sigma y^4 + y^8."""
        assert weight_power(-1, 2) == LaurentPoly({0: 1, 4: 2, 8: 1})

    def test_root_argument_selects_branch(self):
        u = AlgebraicTerm(LaurentPoly.one(), -1, 1)
        root = np.sqrt(1 - Y ** 4)
        np.testing.assert_allclose(u(Y, -root), -root)


class TestAlgebraicSum:
    def test_mixed_parity_keeps_two_parts(self):
        even = AlgebraicTerm(LaurentPoly.monomial(1), 0, 1)
        odd = AlgebraicTerm(LaurentPoly.one(), 1, 1)
        s = AlgebraicSum.of(even, odd)
        assert s.m_values == (1, 0)
        np.testing.assert_allclose(s(Y), even(Y) + odd(Y), rtol=1e-13)

    def test_same_parity_merges(self):
        s = AlgebraicSum.of(AlgebraicTerm(LaurentPoly.one(), 0, -1), AlgebraicTerm(LaurentPoly.one(), 2, -1))
        assert s.m_values == (2,)

    def test_product_and_derivative_follow_values(self):
        s = AlgebraicSum.of(AlgebraicTerm(LaurentPoly.monomial(2), 1, -1), AlgebraicTerm(LaurentPoly.one(), 0, -1))
        np.testing.assert_allclose((s * s)(Y), s(Y) ** 2, rtol=1e-12)
        h = 1e-6
        np.testing.assert_allclose(s.diff()(Y), (s(Y + h) - s(Y - h)) / (2 * h), rtol=1e-7)

    def test_zero_sum(self):
        z = AlgebraicSum.zero(1)
        assert z.is_zero and z.m_values == ()
        np.testing.assert_array_equal(z(Y), np.zeros_like(Y))

    def test_empty_sum_needs_sigma(self):
        with pytest.raises(DomainError):
            AlgebraicSum.of()


def _random_poly(rng, low=-4, high=6):
    powers = rng.choice(np.arange(low, high + 1), size=4, replace=False)
    values = rng.normal(size=4) + 1j * rng.normal(size=4)
    return LaurentPoly(dict(zip(powers.tolist(), values)))


def _random_term(rng, sigma):
    return AlgebraicTerm(_random_poly(rng, 0, 7), int(rng.integers(-1, 4)), sigma)


def _assert_same_poly(p, q, rtol=1e-12):
    powers = sorted(set(p.coeffs) | set(q.coeffs))
    left = np.array([p.coeffs.get(n, 0j) for n in powers])
    right = np.array([q.coeffs.get(n, 0j) for n in powers])
    scale = max(np.abs(left).max(initial=0.0), np.abs(right).max(initial=0.0))
    np.testing.assert_allclose(left, right, rtol=rtol, atol=rtol * scale)


class TestRingAxioms:
    """Laws of the coefficient ring on random instances."""

    @pytest.mark.parametrize("seed", range(6))
    def test_multiplication_associative(self, seed):
        rng = np.random.default_rng(seed)
        p, q, r = (_random_poly(rng) for _ in range(3))
        _assert_same_poly((p * q) * r, p * (q * r))

    @pytest.mark.parametrize("seed", range(6))
    def test_multiplication_commutative(self, seed):
        rng = np.random.default_rng(seed)
        p, q = _random_poly(rng), _random_poly(rng)
        _assert_same_poly(p * q, q * p)

    @pytest.mark.parametrize("seed", range(6))
    def test_distributive(self, seed):
        rng = np.random.default_rng(seed)
        p, q, r = (_random_poly(rng) for _ in range(3))
        _assert_same_poly(p * (q + r), p * q + p * r)

    @pytest.mark.parametrize("seed", range(6))
    def test_addition_associative_with_inverse(self, seed):
        rng = np.random.default_rng(seed)
        p, q, r = (_random_poly(rng) for _ in range(3))
        _assert_same_poly((p + q) + r, p + (q + r))
        assert (p - p).is_zero

    @pytest.mark.parametrize("seed", range(6))
    def test_leibniz_rule_polynomials(self, seed):
        rng = np.random.default_rng(seed)
        p, q = _random_poly(rng), _random_poly(rng)
        _assert_same_poly((p * q).diff(), p.diff() * q + p * q.diff())

    @pytest.mark.parametrize("sigma", [1, -1])
    @pytest.mark.parametrize("seed", range(4))
    def test_leibniz_rule_terms(self, seed, sigma):
        rng = np.random.default_rng(100 + seed)
        u, v = _random_term(rng, sigma), _random_term(rng, sigma)
        left = at_diff(at_mul(u, v))
        right = at_add(at_mul(at_diff(u), v), at_mul(u, at_diff(v)))
        assert left.m == right.m
        _assert_same_poly(left.num, right.num)

    @pytest.mark.parametrize("seed", range(4))
    def test_sum_distributive_over_values(self, seed):
        rng = np.random.default_rng(200 + seed)
        s = AlgebraicSum.of(_random_term(rng, -1), _random_term(rng, -1))
        t = AlgebraicSum.of(_random_term(rng, -1))
        u = AlgebraicSum.of(_random_term(rng, -1))
        np.testing.assert_allclose((s * (t + u))(Y), (s * t + s * u)(Y), rtol=1e-11)


class TestGamma:
    def test_quarter(self):
        assert gamma_fn(0.25) == pytest.approx(3.6256099082, rel=1e-10)

    def test_reflection(self):
        """Gamma(1/4) Gamma(3/4) = pi sqrt(2)."""
        assert gamma_fn(0.25) * gamma_fn(0.75) == pytest.approx(np.pi * np.sqrt(2), rel=1e-14)

    @pytest.mark.parametrize("z", [0, -0.5, 1j])
    def test_rejects_non_positive(self, z):
        with pytest.raises(DomainError):
            gamma_fn(z)
