import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hasse import (DivisionByZero, NotAPthPower, NotPrime, Polynomial, PrimeField,
                   RationalFunction, lucas_binomial, parse_ratfun, pth_root_ratfun, ratfun_arith)
from hasse.arith import is_prime

from tests.strategies import PRIMES, polynomials, primes, ratfuns


def rf(text, p):
    return parse_ratfun(text, p)


def evaluate(f, x, p):
    """Brute-force value of f at x in F_p, or None at a pole."""
    num = sum(c * pow(x, k, p) for k, c in enumerate(f.num)) % p
    den = sum(c * pow(x, k, p) for k, c in enumerate(f.den)) % p
    return None if den == 0 else num * pow(den, -1, p) % p


class TestExamples:
    def test_sum_collapses_to_one(self):
        a, b = rf("s/(s+1)", 3), rf("1/(s+1)", 3)
        assert ratfun_arith(a, b, "add") == 1

    def test_common_factor_is_cancelled(self):
        f = rf("(s^2 - 1)/(s + 1)", 3)
        assert f == rf("s + 2", 3)
        assert f.den == (1,)

    def test_inverse_law(self):
        f = rf("(s^2+1)/s", 5)
        assert ratfun_arith(f, f.inverse(), "mul").is_one()

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            ratfun_arith(rf("s", 3), rf("0", 3), "div")
        with pytest.raises(ZeroDivisionError):
            rf("0", 5).inverse()

    def test_lucas_examples(self):
        assert lucas_binomial(4, 2, 3) == 0
        assert lucas_binomial(10, 2, 3) == 0
        assert all(lucas_binomial(n, 0, p) == 1 for p in PRIMES for n in range(30))

    def test_pth_root_examples(self):
        assert pth_root_ratfun(rf("s^3/(s^3+1)", 3), 1) == rf("s/(s+1)", 3)
        f = rf("(s^2+2)/(s+1)", 3)
        assert pth_root_ratfun(f, 0) == f
        with pytest.raises(NotAPthPower):
            pth_root_ratfun(rf("s+1", 3), 1)

    def test_non_prime_rejected(self):
        for bad in (0, 1, 4, 9, 15):
            with pytest.raises(NotPrime):
                PrimeField(bad)


def test_is_prime_matches_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, n))
    assert all(is_prime(n) == slow(n) for n in range(200))


def test_prime_field_inverse():
    for p in PRIMES:
        F = PrimeField(p)
        assert all(a * F.inv(a) % p == 1 for a in range(1, p))


@pytest.mark.parametrize("p", PRIMES)
def test_lucas_exhaustive_against_math_comb(p):
    for n in range(101):
        for k in range(n + 3):
            assert lucas_binomial(n, k, p) == math.comb(n, k) % p


class TestPolynomial:
    @given(primes.flatmap(lambda p: st.tuples(polynomials(p), polynomials(p), st.integers(0, p - 1))))
    def test_ring_ops_match_pointwise_evaluation(self, args):
        f, g, x = args
        p = f.p
        assert (f + g)(x) == (f(x) + g(x)) % p
        assert (f - g)(x) == (f(x) - g(x)) % p
        assert (f * g)(x) == f(x) * g(x) % p

    @given(primes.flatmap(lambda p: st.tuples(polynomials(p), polynomials(p))))
    def test_division_with_remainder(self, args):
        f, g = args
        if not g:
            return
        q, r = divmod(f, g)
        assert q * g + r == f
        assert not r or r.degree < g.degree

    @given(primes.flatmap(lambda p: st.tuples(polynomials(p), polynomials(p))))
    def test_gcd_divides_both_and_is_monic(self, args):
        f, g = args
        h = f.gcd(g)
        if not f and not g:
            assert not h
            return
        assert h.leading_coefficient == 1
        assert not f % h and not g % h


class TestRationalFunction:
    @given(primes.flatmap(lambda p: st.tuples(ratfuns(p), ratfuns(p))))
    def test_canonical_form(self, args):
        for f in args:
            assert f.denominator.leading_coefficient == 1
            assert f.numerator.gcd(f.denominator) == Polynomial([1], f.p)
        a, b = args
        # equal values have identical representations
        assert (a * b).num == (b * a).num and (a * b).den == (b * a).den

    @settings(max_examples=60)
    @given(primes.flatmap(lambda p: st.tuples(ratfuns(p), ratfuns(p), ratfuns(p))))
    def test_field_axioms(self, args):
        a, b, c = args
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0
        if a:
            assert a / a == 1

    @given(primes.flatmap(lambda p: st.tuples(ratfuns(p), ratfuns(p), st.integers(0, p - 1))))
    def test_arithmetic_matches_pointwise_evaluation(self, args):
        a, b, x = args
        p = a.p
        va, vb = evaluate(a, x, p), evaluate(b, x, p)
        vs, vm = evaluate(a + b, x, p), evaluate(a * b, x, p)
        # a pole of the sum at x forces a pole of one summand
        if va is not None and vb is not None:
            assert vs == (va + vb) % p
            assert vm == va * vb % p

    @given(primes.flatmap(lambda p: st.tuples(ratfuns(p, maxdeg=3), st.integers(0, 2))))
    def test_pth_root_roundtrip(self, args):
        f, e = args
        q = f.p ** e
        assert pth_root_ratfun(f ** q, e) == f
        assert pth_root_ratfun(f.frobenius(e), e) == f

    @given(primes.flatmap(lambda p: ratfuns(p, nonzero=True)))
    def test_frobenius_is_power(self, f):
        assert f.frobenius(1) == f ** f.p
        assert f ** -2 == (f * f).inverse()

    def test_hash_respects_equality(self):
        for p in PRIMES:
            seen = {}
            for cs in product(range(p), repeat=2):
                f = RationalFunction(Polynomial(cs, p) * Polynomial([1, 1], p),
                                     Polynomial([1, 1], p) * Polynomial([2 % p, 1], p))
                seen.setdefault(f, []).append(f)
            assert all(hash(g) == hash(bucket[0]) for bucket in seen.values() for g in bucket)
