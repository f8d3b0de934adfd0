"""Truncated power series over F_p(s).

``TruncSeries`` holds c_0..c_{N-1} of a series in one variable (``T`` by
default; the same type is used for series in ``U``).  ``TruncBiSeries``
holds the coefficients of U^i T^j for i + j < N, i.e. it is truncated by
total degree, so the substitution T -> U + T is exact through degree N - 1.
"""

from __future__ import annotations

from flint import nmod_poly

from .arith import RationalFunction, _reduce, lucas_binomial
from .errors import NonzeroConstantTerm, NotInvertible, OrderMismatch, ParseError
from .parsing import evaluate, monomial_text, parse_ast

DEFAULT_ORDER = 16


def _zero(p):
    return RationalFunction.constant(0, p)


def _check_orders(a, b):
    if a.order != b.order:
        raise OrderMismatch(f"series orders differ: {a.order} vs {b.order}")
    if a.p != b.p:
        raise ValueError(f"characteristic mismatch: {a.p} vs {b.p}")


def _common(coeffs, p):
    """Numerators over a shared monic denominator D: c_k = N_k / D."""
    den = nmod_poly([1], p)
    for c in coeffs:
        d = c._d
        if not d.is_one() and not (den % d).is_zero():
            den = den * (d // den.gcd(d))
    nums = []
    for c in coeffs:
        if c._n.is_zero():
            nums.append(c._n)
        elif c._d.is_one():
            nums.append(c._n * den)
        else:
            nums.append(c._n * (den // c._d))
    return nums, den


def _width(polys):
    return max((f.degree() for f in polys if not f.is_zero()), default=0) + 1


def _pack(polys, width, p):
    """Kronecker substitution T = s^width: one polynomial holding every block."""
    out = nmod_poly([], p)
    for k, f in enumerate(polys):
        if not f.is_zero():
            out += f.left_shift(k * width)
    return out


def _unpack(packed, width, n):
    return [packed.right_shift(k * width).truncate(width) for k in range(n)]


def _finish(nums, den, p):
    one = den.is_one()
    out = []
    for f in nums:
        if f.is_zero():
            out.append(RationalFunction._raw(f, nmod_poly([1], p), p))
        elif one:
            out.append(RationalFunction._raw(f, den, p))
        else:
            out.append(RationalFunction._raw(*_reduce(f, den), p))
    return out


def _mul_coeffs(a, b, n, p):
    """Truncated product of two coefficient lists over F_p(s)."""
    return _mul_common(_common(a[:n], p), _common(b[:n], p), n, p)


def _mul_common(a, b, n, p):
    (na, da), (nb, db) = a, b
    width = _width(na) + _width(nb)
    packed = _pack(na, width, p).mul_low(_pack(nb, width, p), n * width)
    return _finish(_unpack(packed, width, n), da * db, p)


class TruncSeries:
    """Power series modulo terms of degree >= ``order``."""

    __slots__ = ("p", "order", "coeffs", "var")

    def __init__(self, coeffs, order: int, p: int, var: str = "T"):
        if order < 1:
            raise ValueError("order must be positive")
        zero = _zero(p)
        cs = []
        for c in list(coeffs)[:order]:
            if isinstance(c, int):
                c = RationalFunction.constant(c, p)
            cs.append(c)
        cs.extend([zero] * (order - len(cs)))
        self.p = p
        self.order = order
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def _raw(cls, coeffs, order, p, var="T"):
        obj = cls.__new__(cls)
        obj.p = p
        obj.order = order
        obj.coeffs = tuple(coeffs)
        obj.var = var
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, order, p, var="T"):
        return cls._raw([_zero(p)] * order, order, p, var)

    @classmethod
    def constant(cls, c, order, p=None, var="T"):
        if isinstance(c, int):
            c = RationalFunction.constant(c, p)
        p = c.p
        return cls._raw([c] + [_zero(p)] * (order - 1), order, p, var)

    @classmethod
    def one(cls, order, p, var="T"):
        return cls.constant(1, order, p, var)

    @classmethod
    def gen(cls, order, p, var="T"):
        """The variable itself (T, or U)."""
        return cls.monomial(1, 1, order, p, var)

    @classmethod
    def monomial(cls, c, k, order, p, var="T"):
        cs = [_zero(p)] * order
        if k < order:
            cs[k] = c if isinstance(c, RationalFunction) else RationalFunction.constant(c, p)
        return cls._raw(cs, order, p, var)

    # -- basic protocol ------------------------------------------------------

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, TruncSeries) and self.order == other.order
                and self.p == other.p and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.order, self.coeffs))

    def __repr__(self):
        return f"TruncSeries({str(self)!r}, order={self.order}, p={self.p})"

    def __str__(self):
        return series_text(self)

    def with_var(self, var):
        return TruncSeries._raw(self.coeffs, self.order, self.p, var)

    def truncate(self, order):
        """Change the order; raising it pads with zeros (only sound if the
        caller knows the dropped tail vanishes)."""
        if order <= self.order:
            return TruncSeries._raw(self.coeffs[:order], order, self.p, self.var)
        return TruncSeries._raw(self.coeffs + (_zero(self.p),) * (order - self.order),
                                order, self.p, self.var)

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self):
        return not any(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            _check_orders(self, other)
            return other
        if isinstance(other, (int, RationalFunction)):
            return TruncSeries.constant(other, self.order, self.p, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncSeries._raw([a + b for a, b in zip(self.coeffs, other.coeffs)],
                                self.order, self.p, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw([-a for a in self.coeffs], self.order, self.p, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncSeries._raw([a - b for a, b in zip(self.coeffs, other.coeffs)],
                                self.order, self.p, self.var)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, RationalFunction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncSeries._raw(_mul_coeffs(self.coeffs, other.coeffs, self.order, self.p),
                                self.order, self.p, self.var)

    def __rmul__(self, other):
        if isinstance(other, (int, RationalFunction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        if isinstance(c, int):
            c = RationalFunction.constant(c, self.p)
        return TruncSeries._raw([c * a for a in self.coeffs], self.order, self.p, self.var)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncSeries.one(self.order, self.p, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse; needs a nonzero constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise NotInvertible("series with zero constant term is not a unit")
        inv0 = c0.inverse()
        n = self.order
        out = [inv0]
        nz = [(j, y) for j, y in enumerate(self.coeffs) if y and j]
        for k in range(1, n):
            acc = _zero(self.p)
            for j, y in nz:
                if j > k:
                    break
                acc = acc + y * out[k - j]
            out.append(-(acc * inv0))
        return TruncSeries._raw(out, n, self.p, self.var)

    def __truediv__(self, other):
        if isinstance(other, (int, RationalFunction)):
            if isinstance(other, int):
                other = RationalFunction.constant(other, self.p)
            return self.scale(other.inverse())
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def compose(self, g):
        return series_compose(self, g)

    def evaluate_polynomial(self, poly_coeffs):
        """poly(self) for a polynomial in s given by residues (Horner)."""
        return _horner([RationalFunction.constant(c, self.p) for c in poly_coeffs], self)


def _horner(coeffs, g):
    """sum_i coeffs[i] g^i by Horner's rule, reducing after every step."""
    n, p = g.order, g.p
    zero = _zero(p)
    acc = [zero] * n
    if coeffs:
        acc[0] = coeffs[-1]
    G, dg = _common(g.coeffs, p)
    for c in reversed(coeffs[:-1]):
        acc = _mul_common(_common(acc, p), (G, dg), n, p)
        acc[0] = acc[0] + c
    return TruncSeries._raw(acc, n, p, g.var)


def series_compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g(T)) truncated to the common order; g must have no constant term."""
    _check_orders(f, g)
    if g.coeffs[0]:
        raise NonzeroConstantTerm("inner series must have zero constant term")
    # drop the trailing zeros of f so Horner only runs over its support
    cs = list(f.coeffs)
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        return TruncSeries.zero(f.order, f.p, f.var)
    out = _horner(cs, g)
    return TruncSeries._raw(out.coeffs, f.order, f.p, f.var)


def series_reversion(P: TruncSeries) -> TruncSeries:
    """Compositional inverse Q with P(Q(T)) = Q(P(T)) = T.

    Coefficient k of Q is read off from [P(Q)]_k = 0 for k >= 2: the powers
    Q^j (j >= 2) only involve coefficients of Q below k, so each new
    coefficient is a linear solve against the unit P_1.
    """
    n, p = P.order, P.p
    if P.coeffs[0]:
        raise NotInvertible("substitution series has a nonzero constant term")
    if n < 2:
        return TruncSeries.zero(n, p, P.var)
    if not P.coeffs[1]:
        raise NotInvertible("linear coefficient is zero")
    zero = _zero(p)
    inv1 = P.coeffs[1].inverse()
    q = [zero] * n
    q[1] = inv1
    # powers[j][k] = [Q^j]_k, filled column by column
    powers = [None, q] + [[zero] * n for _ in range(2, n)]
    for k in range(2, n):
        for j in range(2, k + 1):
            prev = powers[j - 1]
            acc = zero
            for i in range(1, k - j + 2):
                if q[i] and prev[k - i]:
                    acc = acc + q[i] * prev[k - i]
            powers[j][k] = acc
        acc = zero
        for j in range(2, k + 1):
            if P.coeffs[j] and powers[j][k]:
                acc = acc + P.coeffs[j] * powers[j][k]
        q[k] = -(acc * inv1)
    return TruncSeries._raw(q, n, p, P.var)


# -- bivariate -----------------------------------------------------------------

class TruncBiSeries:
    """Series in U, T truncated by total degree: rows[i][j] is the
    coefficient of U^i T^j, defined for i + j < order."""

    __slots__ = ("p", "order", "rows")

    def __init__(self, rows, order, p):
        self.p = p
        self.order = order
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def zero(cls, order, p):
        z = _zero(p)
        return cls([[z] * (order - i) for i in range(order)], order, p)

    @classmethod
    def from_t(cls, f: TruncSeries):
        """f(T) viewed bivariately."""
        z = _zero(f.p)
        rows = [list(f.coeffs)] + [[z] * (f.order - i) for i in range(1, f.order)]
        return cls(rows, f.order, f.p)

    @classmethod
    def from_u(cls, f: TruncSeries):
        """f(U) viewed bivariately."""
        z = _zero(f.p)
        rows = [[f.coeffs[i]] + [z] * (f.order - i - 1) for i in range(f.order)]
        return cls(rows, f.order, f.p)

    @classmethod
    def constant(cls, c, order):
        b = cls.zero(order, c.p)
        rows = [list(r) for r in b.rows]
        rows[0][0] = c
        return cls(rows, order, c.p)

    def coefficient(self, i, j):
        return self.rows[i][j]

    def items(self):
        """(i, j, coefficient) ordered by total degree, then by power of U."""
        for k in range(self.order):
            for i in range(k + 1):
                yield i, k - i, self.rows[i][k - i]

    def __eq__(self, other):
        return (isinstance(other, TruncBiSeries) and self.order == other.order
                and self.p == other.p and self.rows == other.rows)

    def __hash__(self):
        return hash((self.p, self.order, self.rows))

    def __repr__(self):
        return f"TruncBiSeries({str(self)!r}, order={self.order}, p={self.p})"

    def __str__(self):
        terms = [monomial_text(c, [("U", i), ("T", j)]) for i, j, c in self.items() if c]
        return " + ".join(terms) if terms else "0"

    def first_mismatch(self, other):
        """First (i, j, mine, theirs) where the two differ, or None."""
        _check_orders(self, other)
        for (i, j, a), (_, _, b) in zip(self.items(), other.items()):
            if a != b:
                return i, j, a, b
        return None

    def _coerce(self, other):
        if isinstance(other, TruncBiSeries):
            _check_orders(self, other)
            return other
        if isinstance(other, int):
            other = RationalFunction.constant(other, self.p)
        if isinstance(other, RationalFunction):
            return TruncBiSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncBiSeries([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                             self.order, self.p)

    __radd__ = __add__

    def __neg__(self):
        return TruncBiSeries([[-a for a in r] for r in self.rows], self.order, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n, z = self.order, _zero(self.p)
        out = [[z] * (n - i) for i in range(n)]
        nz_b = [(i, j, c) for i, j, c in other.items() if c]
        for i1, j1, a in self.items():
            if not a:
                continue
            room = n - i1 - j1
            for i2, j2, b in nz_b:
                if i2 + j2 >= room:
                    break
                out[i1 + i2][j1 + j2] = out[i1 + i2][j1 + j2] + a * b
        return TruncBiSeries(out, n, self.p)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncBiSeries.constant(RationalFunction.constant(1, self.p), self.order)
        for _ in range(e):
            result = result * self
        return result

    def inverse(self):
        c0 = self.rows[0][0]
        if not c0:
            raise NotInvertible("bivariate series with zero constant term is not a unit")
        # 1/(c0 (1 - h)) = c0^{-1} sum h^k with h in the maximal ideal
        inv0 = c0.inverse()
        one = TruncBiSeries.constant(RationalFunction.constant(1, self.p), self.order)
        h = one - self * inv0
        result, term = one, one
        for _ in range(1, self.order):
            term = term * h
            result = result + term
        return result * inv0

    def specialize_u0(self) -> TruncSeries:
        """Set U = 0; a series in T."""
        return TruncSeries._raw(self.rows[0], self.order, self.p, "T")

    def specialize_t0(self) -> TruncSeries:
        """Set T = 0; a series in U."""
        return TruncSeries._raw([r[0] for r in self.rows], self.order, self.p, "U")


def substitute_u_plus_t(f: TruncSeries) -> TruncBiSeries:
    """f(U + T): the U^a T^b coefficient is C(a+b, a) c_{a+b} (mod p)."""
    n, p = f.order, f.p
    z = _zero(p)
    rows = []
    for a in range(n):
        row = []
        for b in range(n - a):
            c = f.coeffs[a + b]
            if c:
                k = lucas_binomial(a + b, a, p)
                row.append(c * k if k != 1 else c)
            else:
                row.append(z)
        rows.append(row)
    return TruncBiSeries(rows, n, p)


def map_coefficients(f: TruncSeries, phi) -> TruncBiSeries:
    """Apply ``phi`` to each coefficient: sum_j phi(c_j)(U) T^j.

    ``phi(c, order)`` must return a series in U of at least ``order``
    terms; coefficient j only needs order N - j under total-degree
    truncation, which is what gets requested.
    """
    n, p = f.order, f.p
    z = _zero(p)
    cols = []
    for j, c in enumerate(f.coeffs):
        image = phi(c, n - j)
        cols.append(image.coeffs[: n - j])
    rows = [[cols[j][i] if i < len(cols[j]) else z for j in range(n - i)] for i in range(n)]
    return TruncBiSeries(rows, n, p)


# -- text ----------------------------------------------------------------------

def series_text(f: TruncSeries) -> str:
    terms = [monomial_text(c, [(f.var, k)]) for k, c in enumerate(f.coeffs) if c]
    return " + ".join(terms) if terms else "0"


class _SeriesEval:
    def __init__(self, p, order, var="T"):
        self.p, self.order, self.name = p, order, var

    def const(self, c):
        return TruncSeries.constant(c, self.order, self.p, self.name)

    def var(self, name):
        if name == "s":
            return TruncSeries.constant(RationalFunction.s(self.p), self.order, self.p, self.name)
        if name == self.name:
            return TruncSeries.gen(self.order, self.p, self.name)
        raise ParseError(f"variable {name!r} not allowed in a series in {self.name}")

    def inverse(self, x):
        return x.inverse()

    def power(self, x, e):
        return x ** e


class _BiSeriesEval:
    def __init__(self, p, order):
        self.p, self.order = p, order

    def const(self, c):
        return TruncBiSeries.constant(RationalFunction.constant(c, self.p), self.order)

    def var(self, name):
        if name == "s":
            return TruncBiSeries.constant(RationalFunction.s(self.p), self.order)
        g = TruncSeries.gen(self.order, self.p)
        if name == "T":
            return TruncBiSeries.from_t(g)
        if name == "U":
            return TruncBiSeries.from_u(g)
        raise ParseError(f"unknown variable {name!r}")

    def inverse(self, x):
        return x.inverse()

    def power(self, x, e):
        return x ** e


def parse_series(text: str, p: int, order: int = DEFAULT_ORDER, var: str = "T") -> TruncSeries:
    from .arith import check_prime
    check_prime(p)
    if order < 1:
        raise ValueError("order must be positive")
    return evaluate(parse_ast(text, ("s", var)), _SeriesEval(p, order, var), text)


def parse_biseries(text: str, p: int, order: int = DEFAULT_ORDER) -> TruncBiSeries:
    from .arith import check_prime
    check_prime(p)
    return evaluate(parse_ast(text, ("s", "T", "U")), _BiSeriesEval(p, order), text)
