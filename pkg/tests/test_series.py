from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hasse import (NonzeroConstantTerm, NotInvertible, OrderMismatch, RationalFunction,
                   TruncBiSeries, TruncSeries, map_coefficients, parse_biseries, parse_series,
                   series_compose, series_reversion, standard_derivation, substitute_u_plus_t)

from tests.strategies import primes, series


def S(text, p, order=8):
    return parse_series(text, p, order)


def naive_compose(f, g):
    """sum_k f_k g^k with explicit powers."""
    total = TruncSeries.zero(f.order, f.p)
    power = TruncSeries.one(f.order, f.p)
    for c in f.coeffs:
        total = total + power.scale(c)
        power = power * g
    return total


class TestExamples:
    def test_identity_substitution(self):
        g = S("s*T + T^3", 5)
        assert series_compose(S("T", 5), g) == g

    def test_monomial_substitution(self):
        assert series_compose(S("1 + T + T^2", 3, 7), S("T^3", 3, 7)) == S("1 + T^3 + T^6", 3, 7)

    def test_generator_composition(self):
        assert series_compose(S("s + T", 5), S("T + s*T^2", 5)) == S("s + T + s*T^2", 5)

    def test_reversion_identity(self):
        assert series_reversion(S("T", 7)) == S("T", 7)

    def test_reversion_of_t_plus_t2(self):
        assert series_reversion(S("T + T^2", 5, 6)) == S("T + 4*T^2 + 2*T^3 + 4*T^5", 5, 6)

    def test_reversion_brute_force(self):
        # search every F_5 candidate with unit linear term
        P = S("T + T^2", 5, 6)
        target = S("T", 5, 6)
        hits = [cs for cs in product(range(5), repeat=4)
                if series_compose(P, TruncSeries([0, 1, *cs], 6, 5)) == target]
        assert hits == [(4, 2, 0, 4)]

    def test_reversion_needs_linear_term(self):
        with pytest.raises(NotInvertible):
            series_reversion(S("T^3", 3))
        with pytest.raises(NotInvertible):
            series_reversion(S("1 + T", 3))

    def test_compose_needs_zero_constant_term(self):
        with pytest.raises(NonzeroConstantTerm):
            series_compose(S("T", 3), S("1 + T", 3))

    def test_u_plus_t(self):
        assert substitute_u_plus_t(S("T", 3)) == parse_biseries("U + T", 3, 8)
        assert substitute_u_plus_t(S("T^3", 3)) == parse_biseries("U^3 + T^3", 3, 8)
        assert substitute_u_plus_t(S("T^2", 3)) == parse_biseries("U^2 + 2*U*T + T^2", 3, 8)

    def test_map_coefficients(self):
        theta = standard_derivation(3, 8)
        f = S("s*T", 3)
        as_constants = map_coefficients(f, lambda c, n: TruncSeries.constant(c, n).with_var("U"))
        assert as_constants == TruncBiSeries.from_t(f)
        assert map_coefficients(f, theta.apply_u) == parse_biseries("(s + U)*T", 3, 8)
        assert map_coefficients(S("s^2", 3), theta.apply_u) == parse_biseries("s^2 + 2*s*U + U^2", 3, 8)


def test_mixed_orders_rejected():
    with pytest.raises(OrderMismatch):
        S("T", 3, 4) + S("T", 3, 5)
    with pytest.raises(OrderMismatch):
        S("T", 3, 4) * S("T", 3, 5)


def test_inverse_needs_unit():
    with pytest.raises(NotInvertible):
        S("T + T^2", 3).inverse()
    with pytest.raises(NotInvertible):
        S("0", 3).inverse()


def test_valuation_and_truncate():
    f = S("s*T^2 + T^5", 3)
    assert f.valuation() == 2
    assert f.truncate(3) == S("s*T^2", 3, 3)


def triples(p, order=8):
    return st.tuples(series(p, order), series(p, order, const=False),
                     series(p, order, const=False))


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(triples))
def test_composition_associative(args):
    f, g, h = args
    assert series_compose(series_compose(f, g), h) == series_compose(f, series_compose(g, h))


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(series(p, 7), series(p, 7, const=False))))
def test_horner_matches_naive_composition(args):
    f, g = args
    assert series_compose(f, g) == naive_compose(f, g)


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: series(p, 10, const=False, unit_linear=True)))
def test_reversion_roundtrip(P):
    Q = series_reversion(P)
    T = TruncSeries.gen(P.order, P.p)
    assert series_compose(P, Q) == T
    assert series_compose(Q, P) == T


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(series(p, 7, maxdeg=2), series(p, 7, maxdeg=2))))
def test_product_matches_schoolbook(args):
    f, g = args
    zero = RationalFunction.constant(0, f.p)
    for k in range(f.order):
        assert (f * g)[k] == sum((f[i] * g[k - i] for i in range(k + 1)), zero)


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(series(p, 7), series(p, 7))))
def test_ring_laws(args):
    f, g = args
    assert f * g == g * f
    assert (f + g) * (f - g) == f * f - g * g
    if f[0]:
        assert f * f.inverse() == TruncSeries.one(f.order, f.p)


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: series(p, 8)))
def test_specialisations_of_u_plus_t(f):
    bi = substitute_u_plus_t(f)
    assert bi.specialize_u0() == f
    assert bi.specialize_t0() == f.with_var("U")


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_frobenius_is_additive(p):
    for d in range(3):
        q = p ** d
        order = q + 2
        lhs = substitute_u_plus_t(TruncSeries.monomial(1, q, order, p))
        assert lhs == parse_biseries(f"U^{q} + T^{q}", p, order)


@settings(max_examples=30, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(series(p, 6), series(p, 6))))
def test_u_plus_t_is_multiplicative(args):
    f, g = args
    assert substitute_u_plus_t(f * g) == substitute_u_plus_t(f) * substitute_u_plus_t(g)


def test_biseries_truncates_by_total_degree():
    x = parse_biseries("U + T", 5, 3)
    assert x ** 3 == TruncBiSeries.zero(3, 5)
    assert x * x == parse_biseries("U^2 + 2*U*T + T^2", 5, 3)
    assert (TruncBiSeries.constant(RationalFunction.constant(1, 5), 3) + x).inverse() \
        == parse_biseries("1 - U - T + U^2 + 2*U*T + T^2", 5, 3)
