"""Substitutions T -> P(T) acting on iterative derivations.

A continuous F-algebra endomorphism lambda of F[[T]] is fixed by
P = lambda(T), which must have no constant term; it is an automorphism iff
the linear coefficient is nonzero.  Twisting a derivation by lambda gives
theta~ = lambda o theta, whose generator image is theta(s) composed with P.
Non-invertible substitutions (the Frobenius twist T -> T^(p^d)) are allowed
throughout; invertibility is something you ask, not something enforced.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import RationalFunction, pth_root_ratfun
from .derivation import (CONSTANT, IterativeDerivation, Report, _as_ratfun, compare,
                         global_level, level)
from .errors import (ConstantWitness, Inconsistent, NonzeroConstantTerm, NotAPthPower,
                     NotNormalizable, OrderMismatch, TrivialDerivation)
from .series import (DEFAULT_ORDER, TruncBiSeries, TruncSeries, map_coefficients, parse_series,
                     series_compose, series_reversion, substitute_u_plus_t)


@dataclass(frozen=True)
class Substitution:
    series: TruncSeries

    def __post_init__(self):
        if self.series[0]:
            raise NonzeroConstantTerm("a substitution series must lie in T*F[[T]]")

    @classmethod
    def from_text(cls, text, p, order=DEFAULT_ORDER):
        return cls(parse_series(text, p, order))

    @classmethod
    def from_dict(cls, d):
        return cls.from_text(d["lambda"], int(d["p"]), int(d["order"]))

    @classmethod
    def identity(cls, p, order=DEFAULT_ORDER):
        return cls(TruncSeries.gen(order, p))

    @classmethod
    def frobenius(cls, p, d, order=DEFAULT_ORDER):
        """T -> T^(p^d)."""
        return cls(TruncSeries.monomial(1, p ** d, order, p))

    def to_dict(self):
        return {"p": self.p, "order": self.order, "lambda": str(self.series)}

    @property
    def p(self):
        return self.series.p

    @property
    def order(self):
        return self.series.order

    def is_invertible(self) -> bool:
        return self.order < 2 or bool(self.series[1])

    def inverse(self) -> Substitution:
        return Substitution(series_reversion(self.series))

    def then(self, other: Substitution) -> Substitution:
        """The substitution 'apply self, then other': T -> P_self(P_other(T))."""
        return Substitution(series_compose(self.series, other.series))

    def __str__(self):
        return f"T -> {self.series}"


def apply_substitution(theta: IterativeDerivation, lam: Substitution) -> IterativeDerivation:
    """lambda o theta.  A ring homomorphism by construction; iterativity is
    not guaranteed and must be checked separately."""
    g = series_compose(theta.generator, lam.series)
    return IterativeDerivation(theta.p, theta.order, g)


def frobenius_twist(theta: IterativeDerivation, d: int) -> IterativeDerivation:
    return apply_substitution(theta, Substitution.frobenius(theta.p, d, theta.order))


def check_equivalence_condition(theta_tilde: IterativeDerivation, lam: Substitution) -> Report:
    """Compare P(U+T) with P(U) + theta~_U[[T]](P(T)) modulo total degree N.

    For theta~ = lambda o theta with theta iterative, passing is equivalent
    to theta~ being iterative.
    """
    P = lam.series
    if P.order != theta_tilde.order:
        raise OrderMismatch(f"substitution order {P.order} != derivation order {theta_tilde.order}")
    lhs = substitute_u_plus_t(P)
    rhs = TruncBiSeries.from_u(P.with_var("U")) + map_coefficients(P, theta_tilde.apply_u)
    return compare(lhs, rhs, P.order)


def recover_substitution(theta: IterativeDerivation, theta_tilde: IterativeDerivation,
                         f="s") -> Substitution:
    """Find lambda with theta~ = lambda o theta, using the witness f.

    With d the level of f, write R = P^(p^d).  Comparing theta~(f) with
    sum_k theta^(k)(f) P^k gives

        R = theta^(p^d)(f)^{-1} (sum_{n>=1} theta~^(n)(f) T^n
                                 - sum_{j>=2} theta^(j p^d)(f) R^j),

    and coefficient k of R^j (j >= 2) only uses coefficients of R below k.
    P is then read off by taking p^d-th roots.  The result has order
    floor(N / p^d).
    """
    if theta.p != theta_tilde.p or theta.order != theta_tilde.order:
        raise ValueError("derivations must share p and order")
    p, n = theta.p, theta.order
    f = _as_ratfun(f, p)
    d = level(theta, f)
    if d is CONSTANT:
        raise ConstantWitness(f"witness {f} is constant")
    q = p ** d
    if q >= n:
        raise ConstantWitness(f"level {d} of the witness is beyond the truncation order")
    a = theta.apply(f)
    b = theta_tilde.apply(f)
    zero = RationalFunction.constant(0, p)
    lead_inv = a[q].inverse()
    # R[k] and powers[j][k] = [R^j]_k, built column by column
    R = [zero] * n
    powers = {}
    for k in range(1, n):
        acc = b[k]
        for j in range(2, n // q + 1):
            if j * q > k:
                break
            col = _power_coeff(R, powers, j, k, zero)
            if col and a[j * q]:
                acc = acc - a[j * q] * col
        R[k] = acc * lead_inv
        if R[k] and k % q:
            raise NotAPthPower(
                f"coefficient {k} of P^{q} is nonzero; theta~ is not a twist of theta")
    m = n // q
    coeffs = [zero] * m
    for i in range(1, m):
        coeffs[i] = pth_root_ratfun(R[i * q], d)
    lam = Substitution(TruncSeries(coeffs, m, p))
    # the recursion only used the witness; check the generator images agree
    if m >= 1:
        lhs = series_compose(theta.generator.truncate(m), lam.series)
        if lhs != theta_tilde.generator.truncate(m):
            raise Inconsistent("recovered substitution does not reproduce theta~ on s")
    return lam


def _power_coeff(R, powers, j, k, zero):
    """[R^j]_k, memoised; R has zero constant term so only R[<k] matter."""
    key = (j, k)
    if key in powers:
        return powers[key]
    if j == 1:
        return R[k]
    acc = zero
    for i in range(1, k):
        if R[i]:
            rest = _power_coeff(R, powers, j - 1, k - i, zero)
            if rest:
                acc = acc + R[i] * rest
    powers[key] = acc
    return acc


def normalize_at(theta: IterativeDerivation, t="s"):
    """Twist theta so that t behaves like the standard variable.

    mu(T) = theta(t) - t, lambda = mu^{-1}; the twisted derivation
    theta~ = lambda o theta satisfies theta~(t) = t + T.  Returns
    (theta~, lambda).
    """
    t = _as_ratfun(t, theta.p)
    image = theta.apply(t)
    if theta.order < 2 or not image[1]:
        raise NotNormalizable(f"theta^(1)({t}) = 0")
    mu = image - t
    lam = Substitution(series_reversion(mu))
    return apply_substitution(theta, lam), lam


def compress(theta: IterativeDerivation):
    """Re-index theta^(j p^d) as the j-th component of a new derivation.

    Returns (theta_bar, d) where d is the global level; theta_bar has order
    floor((N - 1) / p^d) + 1 and theta_bar^(1) != 0.
    """
    d = global_level(theta)
    if d is CONSTANT:
        raise TrivialDerivation("no nonzero component below the truncation order")
    q = theta.p ** d
    m = (theta.order - 1) // q + 1
    g = TruncSeries([theta.generator[j * q] for j in range(m)], m, theta.p)
    return IterativeDerivation(theta.p, m, g), d


def decompress(theta_bar: IterativeDerivation, d: int, max_order: int | None = None):
    """theta^(j p^d) := theta_bar^(j), every other component zero.

    The output order is N * p^d, capped at ``max_order`` when given.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    p = theta_bar.p
    q = p ** d
    n = theta_bar.order * q
    if max_order is not None:
        n = min(n, max_order)
    coeffs = [0] * n
    for j, c in enumerate(theta_bar.generator.coeffs):
        if j * q < n:
            coeffs[j * q] = c
    return IterativeDerivation(p, n, TruncSeries(coeffs, n, p))

