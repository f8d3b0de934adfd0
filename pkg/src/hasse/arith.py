"""Exact arithmetic over F_p: residues, dense polynomials in ``s`` and
reduced rational functions in F_p(s).

Dense polynomial kernels (multiplication, division, gcd) come from FLINT's
``nmod_poly``; the normal form of rational functions, Frobenius powers and
root extraction, and the base-p binomial machinery live here.
"""

from __future__ import annotations

import math
from functools import lru_cache

from flint import nmod_poly

from .errors import DivisionByZero, NotAPthPower, NotPrime

DEG_ZERO = -math.inf  # degree of the zero polynomial


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise NotPrime(f"{p!r} is not a prime")
    if p >= 1 << 63:
        raise NotPrime(f"{p} exceeds a machine word")
    return p


class PrimeField:
    """The prime field F_p.  Elements are plain ints in ``range(p)``."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        self.p = check_prime(p)

    def __call__(self, a: int) -> int:
        return a % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)


def _coeff_tuple(f: nmod_poly) -> tuple:
    return tuple(int(c) for c in f.coeffs())


def _monic(f: nmod_poly) -> nmod_poly:
    lc = int(f.leading_coefficient())
    if lc == 1 or f.is_zero():
        return f
    return f * pow(lc, -1, f.modulus())


def _frobenius(f: nmod_poly, q: int) -> nmod_poly:
    """f**q for q a power of p: F_p is fixed, so exponents scale by q."""
    cs = f.coeffs()
    if not cs:
        return f
    out = [0] * ((len(cs) - 1) * q + 1)
    out[::q] = cs
    return nmod_poly(out, f.modulus())


def _root(f: nmod_poly, q: int):
    cs = f.coeffs()
    if any(int(c) for i, c in enumerate(cs) if i % q):
        return None
    return nmod_poly(cs[::q], f.modulus())


class Polynomial:
    """Dense polynomial in ``s`` over F_p.  Immutable."""

    __slots__ = ("p", "_f")

    def __init__(self, coeffs=(), p: int = 2):
        self.p = p
        self._f = nmod_poly([c % p for c in coeffs], p)

    @classmethod
    def _wrap(cls, f: nmod_poly) -> Polynomial:
        obj = cls.__new__(cls)
        obj.p = f.modulus()
        obj._f = f
        return obj

    @classmethod
    def s(cls, p: int) -> Polynomial:
        return cls._wrap(nmod_poly([0, 1], p))

    @property
    def coeffs(self) -> tuple:
        """Residues, lowest degree first, no trailing zeros."""
        return _coeff_tuple(self._f)

    @property
    def degree(self):
        return DEG_ZERO if self._f.is_zero() else self._f.degree()

    @property
    def leading_coefficient(self) -> int:
        return int(self._f.leading_coefficient()) if not self._f.is_zero() else 0

    def __bool__(self):
        return not self._f.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial((other,), self.p)
        return isinstance(other, Polynomial) and self.p == other.p and self._f == other._f

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)}, p={self.p})"

    def __str__(self):
        from .parsing import poly_text
        return poly_text(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.p != self.p:
                raise ValueError(f"characteristic mismatch: {self.p} vs {other.p}")
            return other._f
        if isinstance(other, int):
            return nmod_poly([other % self.p], self.p)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else Polynomial._wrap(self._f + b)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else Polynomial._wrap(self._f - b)

    def __rsub__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else Polynomial._wrap(b - self._f)

    def __neg__(self):
        return Polynomial._wrap(-self._f)

    def __mul__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else Polynomial._wrap(self._f * b)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        return Polynomial._wrap(self._f ** e)

    def __divmod__(self, other):
        b = self._coerce(other)
        if b.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q, r = divmod(self._f, b)
        return Polynomial._wrap(q), Polynomial._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other: Polynomial) -> Polynomial:
        """Monic gcd (zero if both are zero)."""
        return Polynomial._wrap(_monic(self._f.gcd(other._f)))

    def monic(self) -> Polynomial:
        return Polynomial._wrap(_monic(self._f))

    def __call__(self, x: int) -> int:
        return int(self._f(x))


_ONE_CACHE: dict = {}


def _one(p):
    one = _ONE_CACHE.get(p)
    if one is None:
        one = _ONE_CACHE[p] = nmod_poly([1], p)
    return one


class RationalFunction:
    """Element of F_p(s) kept as a reduced fraction with monic denominator.

    The normal form is unique, so ``==`` is a structural comparison.
    """

    __slots__ = ("p", "_n", "_d", "_hash")

    def __init__(self, numerator=(), denominator=(1,), p: int | None = None):
        if isinstance(numerator, Polynomial):
            p = numerator.p if p is None else p
            numerator = numerator.coeffs
        if isinstance(denominator, Polynomial):
            denominator = denominator.coeffs
        if isinstance(numerator, int):
            numerator = (numerator,)
        if isinstance(denominator, int):
            denominator = (denominator,)
        if p is None:
            raise ValueError("characteristic p required")
        n = nmod_poly([c % p for c in numerator], p)
        d = nmod_poly([c % p for c in denominator], p)
        if d.is_zero():
            raise DivisionByZero("zero denominator")
        self.p = p
        self._n, self._d = _reduce(n, d)
        self._hash = None

    @classmethod
    def _raw(cls, n: nmod_poly, d: nmod_poly, p: int) -> RationalFunction:
        obj = cls.__new__(cls)
        obj.p = p
        obj._n = n
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: int, p: int) -> RationalFunction:
        return cls._raw(nmod_poly([c % p], p), _one(p), p)

    @classmethod
    def s(cls, p: int) -> RationalFunction:
        return cls._raw(nmod_poly([0, 1], p), _one(p), p)

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> RationalFunction:
        return cls._raw(f._f, _one(f.p), f.p)

    @property
    def numerator(self) -> Polynomial:
        return Polynomial._wrap(self._n)

    @property
    def denominator(self) -> Polynomial:
        return Polynomial._wrap(self._d)

    @property
    def num(self) -> tuple:
        return _coeff_tuple(self._n)

    @property
    def den(self) -> tuple:
        return _coeff_tuple(self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_one(self) -> bool:
        return self._n.is_one() and self._d.is_one()

    def is_polynomial(self) -> bool:
        return self._d.is_one()

    def is_constant(self) -> bool:
        """True iff the element lies in F_p."""
        return self._d.is_one() and self._n.degree() <= 0

    def __bool__(self):
        return not self._n.is_zero()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.p == other.p and self._n == other._n and self._d == other._d
        if isinstance(other, int):
            return self._d.is_one() and self._n == nmod_poly([other % self.p], self.p)
        if isinstance(other, Polynomial):
            return self._d.is_one() and self.p == other.p and self._n == other._f
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.p, self.num, self.den))
        return h

    def __repr__(self):
        return f"RationalFunction({str(self)!r}, p={self.p})"

    def __str__(self):
        from .parsing import ratfun_text
        return ratfun_text(self)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.p != self.p:
                raise ValueError(f"characteristic mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return RationalFunction.constant(other, self.p)
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self._n, self._d, other._n, other._d
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        p = self.p
        if b == d:
            n = a + c
            if b.is_one():
                return RationalFunction._raw(n, b, p)
            return RationalFunction._raw(*_reduce(n, b), p)
        if d.is_one():
            return RationalFunction._raw(a + c * b, b, p)
        if b.is_one():
            return RationalFunction._raw(a * d + c, d, p)
        g = b.gcd(d)
        if g.is_one():
            return RationalFunction._raw(*_reduce(a * d + c * b, b * d), p)
        b1, d1 = b // g, d // g
        return RationalFunction._raw(*_reduce(a * d1 + c * b1, b1 * d), p)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self._n, self._d, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        a, b, c, d = self._n, self._d, other._n, other._d
        if a.is_zero() or c.is_zero():
            return RationalFunction._raw(nmod_poly([], p), _one(p), p)
        if b.is_one() and d.is_one():
            return RationalFunction._raw(a * c, b, p)
        # cross-cancel gcd(a, d) and gcd(c, b); denominators stay monic
        if not d.is_one():
            g = a.gcd(d)
            if not g.is_one():
                a, d = a // g, d // g
        if not b.is_one():
            g = c.gcd(b)
            if not g.is_one():
                c, b = c // g, b // g
        return RationalFunction._raw(a * c, b * d, p)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self._n.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        lc = int(self._n.leading_coefficient())
        if lc == 1:
            return RationalFunction._raw(self._d, self._n, self.p)
        inv = pow(lc, -1, self.p)
        return RationalFunction._raw(self._d * inv, self._n * inv, self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        q = e
        while q > 1 and q % self.p == 0:
            q //= self.p
        if q == 1:
            return RationalFunction._raw(_frobenius(self._n, e), _frobenius(self._d, e), self.p)
        return RationalFunction._raw(self._n ** e, self._d ** e, self.p)

    def frobenius(self, e: int = 1) -> RationalFunction:
        """self ** (p ** e)."""
        q = self.p ** e
        return RationalFunction._raw(_frobenius(self._n, q), _frobenius(self._d, q), self.p)

    def __call__(self, x: int) -> int:
        d = int(self._d(x))
        if not d:
            raise DivisionByZero(f"pole at s={x}")
        return int(self._n(x)) * pow(d, -1, self.p) % self.p


def _reduce(n: nmod_poly, d: nmod_poly):
    p = d.modulus()
    if n.is_zero():
        return n, _one(p)
    if d.degree() > 0:
        g = n.gcd(d)
        if not g.is_one():
            n, d = n // g, d // g
    lc = int(d.leading_coefficient())
    if lc != 1:
        inv = pow(lc, -1, p)
        n, d = n * inv, d * inv
    return n, d


@lru_cache(maxsize=None)
def _small_binomials(p: int) -> tuple:
    return tuple(tuple(math.comb(n, k) % p for k in range(p)) for n in range(p))


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p, digit by digit in base p."""
    if k < 0 or n < 0 or k > n:
        return 0
    table = _small_binomials(p)
    r = 1
    while k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        r = r * table[ni][ki] % p
    return r


def pth_root_ratfun(f: RationalFunction, e: int) -> RationalFunction:
    """g with g ** (p ** e) == f.

    The normal form of g^q is num(g)^q / den(g)^q, so f is a q-th power iff
    every exponent in its reduced numerator and denominator is divisible by q.
    """
    if e < 0:
        raise ValueError("e must be non-negative")
    if e == 0:
        return f
    q = f.p ** e
    n, d = _root(f._n, q), _root(f._d, q)
    if n is None or d is None:
        raise NotAPthPower(f"{f} is not a {q}-th power in F_{f.p}(s)")
    return RationalFunction._raw(n, d, f.p)


def ratfun_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
