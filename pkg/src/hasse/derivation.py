"""Iterative (Hasse-Schmidt) derivations on F_p(s).

A derivation is a ring homomorphism theta: F -> F[[T]] with theta^(0) = id.
On F = F_p(s) it is pinned down by the single series g = theta(s): a
rational function num/den is sent to num(g)/den(g).  Everything is held
modulo T^N.

Iterativity is the identity theta_U[[T]] o theta_T = theta_{U+T}.  Both
sides are continuous F_p-algebra maps F -> F[[U, T]], and such a map on
F_p(s) is determined by where it sends s, so it suffices to compare the two
sides on s.  ``verify_iterativity`` does exactly that, optionally re-checking
extra elements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

from .arith import RationalFunction, check_prime, lucas_binomial
from .errors import NotIterative, PreconditionError, TruncationInconclusive
from .parsing import ratfun_text
from .series import (DEFAULT_ORDER, TruncSeries, map_coefficients, parse_series,
                     substitute_u_plus_t)


class Level(enum.Enum):
    CONSTANT = "constant"

    def __repr__(self):
        return "Constant"


CONSTANT = Level.CONSTANT


@dataclass(frozen=True)
class Mismatch:
    i: int
    j: int
    lhs: RationalFunction
    rhs: RationalFunction
    where: tuple = ()

    def to_dict(self):
        d = {"i": self.i, "j": self.j, "lhs": ratfun_text(self.lhs), "rhs": ratfun_text(self.rhs)}
        if self.where:
            d["entry"] = list(self.where)
        return d


@dataclass(frozen=True)
class Report:
    """Outcome of an identity check carried out modulo total degree ``order``."""

    passed: bool
    order: int
    first_failure: Mismatch | None = None

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {
            "pass": self.passed,
            "order": self.order,
            "first_failure": self.first_failure.to_dict() if self.first_failure else None,
        }


def compare(lhs, rhs, order, where=()) -> Report:
    found = lhs.first_mismatch(rhs)
    if found is None:
        return Report(True, order)
    return Report(False, order, Mismatch(*found, where=where))


@dataclass(frozen=True)
class IterativeDerivation:
    p: int
    order: int
    generator: TruncSeries = field(repr=False)

    def __post_init__(self):
        check_prime(self.p)
        g = self.generator
        if g.order != self.order or g.p != self.p:
            raise ValueError("generator image has the wrong order or characteristic")
        if g[0] != RationalFunction.s(self.p):
            raise ValueError(f"generator image must have constant term s, got {g[0]}")

    @classmethod
    def from_text(cls, text: str, p: int, order: int = DEFAULT_ORDER) -> IterativeDerivation:
        return cls(p, order, parse_series(text, p, order))

    @classmethod
    def from_dict(cls, d) -> IterativeDerivation:
        return cls.from_text(d["theta"], int(d["p"]), int(d["order"]))

    def to_dict(self):
        return {"p": self.p, "order": self.order, "theta": str(self.generator)}

    def __str__(self):
        return f"theta(s) = {self.generator}  (p={self.p}, order={self.order})"

    def truncate(self, order: int) -> IterativeDerivation:
        if order > self.order:
            raise ValueError("cannot raise the order of a derivation")
        return IterativeDerivation(self.p, order, self.generator.truncate(order))

    def apply(self, f, order: int | None = None) -> TruncSeries:
        """theta(f) as a series in T (modulo T^order, default the full order)."""
        return _apply(self, _as_ratfun(f, self.p), order or self.order)

    def apply_u(self, f, order: int | None = None) -> TruncSeries:
        return self.apply(f, order).with_var("U")

    def component(self, n: int, f) -> RationalFunction:
        """theta^(n)(f) for n < order."""
        if n >= self.order:
            raise ValueError(f"component {n} is beyond the truncation order {self.order}")
        return self.apply(f, n + 1)[n]

    def is_trivial(self) -> bool:
        return all(not c for c in self.generator.coeffs[1:])

    def verify_iterativity(self, elements=()) -> Report:
        return verify_iterativity(self, elements)

    def level(self, f):
        return level(self, f)

    def global_level(self):
        return global_level(self)


def _as_ratfun(f, p):
    if isinstance(f, RationalFunction):
        return f
    if isinstance(f, int):
        return RationalFunction.constant(f, p)
    if isinstance(f, str):
        from .parsing import parse_ratfun
        return parse_ratfun(f, p)
    raise TypeError(f"cannot interpret {f!r} as an element of F_{p}(s)")


@lru_cache(maxsize=4096)
def _apply(theta: IterativeDerivation, f: RationalFunction, order: int) -> TruncSeries:
    g = theta.generator if order == theta.order else theta.generator.truncate(order)
    num = g.evaluate_polynomial(f.num)
    if f.is_polynomial():
        return num
    # den(g) has constant term den(s) != 0, hence is a unit
    return num * g.evaluate_polynomial(f.den).inverse()


def standard_derivation(p: int, order: int = DEFAULT_ORDER) -> IterativeDerivation:
    """theta_t with theta(s) = s + T, i.e. theta^(n)(s^k) = C(k, n) s^(k-n)."""
    check_prime(p)
    s = RationalFunction.s(p)
    return IterativeDerivation(p, order, TruncSeries([s, 1], order, p))


def apply(theta: IterativeDerivation, f) -> TruncSeries:
    return theta.apply(f)


def _lhs_rhs(theta: IterativeDerivation, f):
    image = theta.apply(f)
    lhs = map_coefficients(image, theta.apply_u)
    rhs = substitute_u_plus_t(image)
    return lhs, rhs


def verify_iterativity(theta: IterativeDerivation, elements=()) -> Report:
    """Check theta_U[[T]](theta_T(x)) == theta_{U+T}(x) modulo total degree N.

    The check on the generator s settles the question for all of F_p(s);
    ``elements`` adds optional redundant re-checks.  On failure the report
    names the first U^i T^j monomial (lowest total degree, then lowest i)
    with lhs = theta_U[[T]](theta_T(x)) and rhs = theta_{U+T}(x).
    """
    s = RationalFunction.s(theta.p)
    for f in [s, *(_as_ratfun(e, theta.p) for e in elements)]:
        lhs, rhs = _lhs_rhs(theta, f)
        report = compare(lhs, rhs, theta.order, () if f == s else (ratfun_text(f),))
        if not report.passed:
            return report
    return Report(True, theta.order)


def level(theta: IterativeDerivation, f):
    """Least d with theta^(p^d)(f) != 0 (checked below the order), or CONSTANT.

    Raises TruncationInconclusive when every component below the order
    vanishes but f is not an element of F_p, and NotIterative when the
    nonzero components are not all at multiples of p^d.
    """
    f = _as_ratfun(f, theta.p)
    if f.is_constant():
        return CONSTANT
    image = theta.apply(f)
    nonzero = [m for m in range(1, theta.order) if image[m]]
    if not nonzero:
        raise TruncationInconclusive(
            f"theta^(m)({ratfun_text(f)}) vanishes for 0 < m < {theta.order}; "
            "cannot decide constancy at this order")
    return _level_of(nonzero, theta.p, f)


def _level_of(nonzero, p, what):
    first = nonzero[0]
    d, q = 0, 1
    while q < first:
        q *= p
        d += 1
    if q != first:
        raise NotIterative(f"first nonzero component of {what} sits at {first}, not a power of {p}")
    bad = [m for m in nonzero if m % q]
    if bad:
        raise NotIterative(f"component {bad[0]} of {what} is nonzero but not divisible by {q}")
    return d


def global_level(theta: IterativeDerivation):
    """Level of the derivation itself; on F_p(s) it is the level of s."""
    nonzero = [m for m in range(1, theta.order) if theta.generator[m]]
    if not nonzero:
        return CONSTANT
    return _level_of(nonzero, theta.p, "s")


def composition_constant(m: int, p: int) -> int:
    """c with (theta^(p^r))^(m_r) o ... o (theta^(1))^(m_0) = c * theta^(m).

    Folds theta^(i) o theta^(j) = C(i+j, i) theta^(i+j) over the base-p
    digits of m, innermost factor theta^(1) first.
    """
    if m < 1:
        raise ValueError("m must be positive")
    check_prime(p)
    c, acc, q = 1, 0, 1
    while m:
        m, digit = divmod(m, p)
        for _ in range(digit):
            c = c * lucas_binomial(acc + q, q, p) % p
            acc += q
        q *= p
    if c == 0:
        raise PreconditionError("composition constant vanished")  # impossible by Lucas
    return c
