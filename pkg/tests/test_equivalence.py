import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hasse import (CONSTANT, ConstantWitness, IterativeDerivation, NonzeroConstantTerm,
                   NotAPthPower, NotNormalizable, OrderMismatch, Substitution, TrivialDerivation,
                   apply_substitution, check_equivalence_condition, compress, decompress,
                   frobenius_twist, global_level, normalize_at, parse_series,
                   recover_substitution, series_compose, standard_derivation, verify_iterativity)

from tests.strategies import (PRIMES, additive_substitution, generic_substitution,
                              iterative_substitution, mixed_substitution, primes, seeded)

seeds = st.integers(0, 10 ** 6)


def D(text, p, order=16):
    return IterativeDerivation.from_text(text, p, order)


def L(text, p, order=16):
    return Substitution.from_text(text, p, order)


class TestExamples:
    def test_identity_substitution_is_neutral(self):
        theta = D("s + T + s*T^3", 5)
        assert apply_substitution(theta, Substitution.identity(5, 16)) == theta

    @pytest.mark.parametrize("p, d", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1)])
    def test_frobenius_twist_generator(self, p, d):
        twisted = frobenius_twist(standard_derivation(p), d)
        assert twisted == D(f"s + T^{p ** d}", p)
        assert check_equivalence_condition(twisted, Substitution.frobenius(p, d, 16)).passed

    def test_identity_condition_on_iterative(self):
        for theta in (standard_derivation(3), D("s + T^9", 3)):
            assert check_equivalence_condition(theta, Substitution.identity(3, 16)).passed

    def test_condition_fails_for_quadratic(self):
        lam = L("T + T^2", 3)
        twisted = apply_substitution(standard_derivation(3), lam)
        report = check_equivalence_condition(twisted, lam)
        assert not report.passed
        assert (report.first_failure.i, report.first_failure.j) == (1, 1)
        assert not verify_iterativity(twisted).passed

    def test_recover_identity(self):
        theta = standard_derivation(3)
        assert recover_substitution(theta, theta, "s") == Substitution.identity(3, 16)

    @pytest.mark.parametrize("witness", ["s", "s^2", "1/(s+1)"])
    def test_recover_given_twist(self, witness):
        lam = L("T + s*T^2", 5)
        twisted = apply_substitution(standard_derivation(5), lam)
        assert recover_substitution(standard_derivation(5), twisted, witness) == lam

    def test_recover_with_level_one_witness(self):
        # s^2 has level 1 at p=2, so only floor(N/2) coefficients are determined
        lam = L("T + s*T^2 + T^5", 2)
        twisted = apply_substitution(standard_derivation(2), lam)
        recovered = recover_substitution(standard_derivation(2), twisted, "s^2")
        assert recovered.order == 8
        assert recovered.series == lam.series.truncate(8)

    def test_recover_errors(self):
        theta = standard_derivation(3)
        with pytest.raises(ConstantWitness):
            recover_substitution(theta, theta, "2")
        with pytest.raises(NotAPthPower):
            recover_substitution(D("s + T^3", 3), theta, "s")

    def test_normalize_examples(self):
        theta = standard_derivation(5, 12)
        assert normalize_at(theta, "s") == (theta, Substitution.identity(5, 12))
        twisted = D("s + T + s*T^2", 5, 12)
        theta_tilde, lam = normalize_at(twisted, "s")
        assert theta_tilde == theta
        assert lam == Substitution(parse_series("T + s*T^2", 5, 12)).inverse()
        with pytest.raises(NotNormalizable):
            normalize_at(standard_derivation(3), "s^3")
        # level > 0: route through compress instead
        with pytest.raises(NotNormalizable):
            normalize_at(D("s + T^3", 3), "s")

    def test_normalize_at_other_element(self):
        theta_tilde, _ = normalize_at(standard_derivation(3, 10), "s^2")
        assert theta_tilde.apply("s^2") == parse_series("s^2 + T", 3, 10)
        assert verify_iterativity(theta_tilde).passed

    def test_compress_examples(self):
        assert compress(standard_derivation(3)) == (standard_derivation(3), 0)
        assert compress(D("s + T^3", 3)) == (standard_derivation(3, 6), 1)
        assert compress(D("s + T^4", 2)) == (standard_derivation(2, 4), 2)
        with pytest.raises(TrivialDerivation):
            compress(D("s", 3))

    def test_decompress_examples(self):
        theta = standard_derivation(3, 6)
        assert decompress(theta, 0) == theta
        assert decompress(theta, 1) == D("s + T^3", 3, 18)
        assert decompress(theta, 1, max_order=16) == D("s + T^3", 3, 16)
        assert compress(decompress(standard_derivation(2, 4), 2)) == (standard_derivation(2, 4), 2)

    def test_substitution_validation(self):
        with pytest.raises(NonzeroConstantTerm):
            L("1 + T", 3)
        with pytest.raises(OrderMismatch):
            check_equivalence_condition(standard_derivation(3, 8), L("T", 3, 9))


@pytest.mark.parametrize("p", PRIMES)
def test_frobenius_is_not_invertible(p):
    for d in (1, 2):
        lam = Substitution.frobenius(p, d, 16)
        assert lam.series[1] == 0
        assert not lam.is_invertible()


@settings(max_examples=60, deadline=None)
@given(primes, seeds)
def test_certificate_agrees_with_verification(p, seed):
    lam = mixed_substitution(seeded(seed), p, 10)
    twisted = apply_substitution(standard_derivation(p, 10), lam)
    assert check_equivalence_condition(twisted, lam).passed == verify_iterativity(twisted).passed


@settings(max_examples=30, deadline=None)
@given(primes, seeds)
def test_iterative_substitutions_pass_both(p, seed):
    lam = iterative_substitution(seeded(seed), p, 10)
    twisted = apply_substitution(standard_derivation(p, 10), lam)
    assert verify_iterativity(twisted).passed
    assert check_equivalence_condition(twisted, lam).passed


@settings(max_examples=40, deadline=None)
@given(primes, seeds)
def test_recovery_roundtrip_and_uniqueness(p, seed):
    rng = seeded(seed)
    order = 10
    theta = standard_derivation(p, order)
    lam = mixed_substitution(rng, p, order)
    twisted = apply_substitution(theta, lam)
    by_s = recover_substitution(theta, twisted, "s")
    assert by_s == lam
    for witness in ("1/(s+1)", "s^2 + s", "(s^3+1)/(s+2)"):
        other = recover_substitution(theta, twisted, witness)
        assert other.series == lam.series.truncate(other.order)


@settings(max_examples=40, deadline=None)
@given(primes, seeds)
def test_group_law(p, seed):
    rng = seeded(seed)
    theta = standard_derivation(p, 8)
    lam1, lam2 = generic_substitution(rng, p, 8), mixed_substitution(rng, p, 8)
    stepwise = apply_substitution(apply_substitution(theta, lam1), lam2)
    assert stepwise == apply_substitution(theta, lam1.then(lam2))
    assert lam1.then(lam2).series == series_compose(lam1.series, lam2.series)


@settings(max_examples=30, deadline=None)
@given(primes, seeds)
def test_inverse_substitution_undoes_twist(p, seed):
    rng = seeded(seed)
    theta = standard_derivation(p, 8)
    lam = generic_substitution(rng, p, 8)
    assert apply_substitution(apply_substitution(theta, lam), lam.inverse()) == theta


@settings(max_examples=30, deadline=None)
@given(primes, seeds)
def test_normalization_of_random_equivalent(p, seed):
    rng = seeded(seed)
    theta = standard_derivation(p, 10)
    twisted = apply_substitution(theta, iterative_substitution(rng, p, 10))
    theta_tilde, lam = normalize_at(twisted, "s")
    assert theta_tilde == theta
    assert check_equivalence_condition(theta_tilde, lam).passed


@settings(max_examples=30, deadline=None)
@given(primes, st.integers(0, 2), seeds)
def test_compress_decompress_inverse(p, d, seed):
    rng = seeded(seed)
    order = 2 * p ** d + 3
    base = apply_substitution(standard_derivation(p, order), additive_substitution(rng, p, order))
    twisted = frobenius_twist(base, d)
    assert global_level(twisted) == d
    theta_bar, level = compress(twisted)
    assert decompress(theta_bar, level, max_order=order) == twisted
    assert compress(decompress(theta_bar, level)) == (theta_bar, level)
    assert global_level(theta_bar) == 0


def test_global_level_of_twist():
    for p in PRIMES:
        assert global_level(frobenius_twist(standard_derivation(p, 60), 1)) == 1
        assert global_level(standard_derivation(p)) == 0
    assert global_level(D("s", 5)) is CONSTANT
