"""Iterative differential modules over (F_p(s), theta) in matrix form.

A free module F^n with basis e_1..e_n carries theta_M determined by the
series matrix A(T): theta_M(e_j) = sum_i A_ij(T) e_i.  By the product rule
theta_M(sum_j f_j e_j) = sum_j theta(f_j) theta_M(e_j), so in coordinates
theta_M(v) = A(T) . theta(v).

Iterativity in matrix form.  Apply theta_{M,U}[[T]] o theta_{M,T} to e_j:

    theta_{M,U}[[T]](sum_i A_ij(T) e_i) = sum_i theta_U[[T]](A_ij(T)) theta_{M,U}(e_i)
                                         = sum_k (sum_i A_ki(U) theta_U[[T]](A_ij(T))) e_k

while theta_{M,U+T}(e_j) = sum_k A_kj(U+T) e_k.  Hence the module is
iterative iff

    A(U + T) = A(U) . theta_U[[T]](A(T))

with theta_U[[T]] acting on the coefficients of each entry.  The factor
order follows from the column convention above.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import RationalFunction
from .derivation import IterativeDerivation, Report, _as_ratfun, compare, standard_derivation
from .equivalence import Substitution, apply_substitution
from .errors import InputError, NotInvertible, OrderMismatch, ParseError
from .series import (TruncBiSeries, TruncSeries, map_coefficients, parse_series, series_compose,
                     substitute_u_plus_t)


@dataclass(frozen=True)
class IDModuleMatrix:
    theta: IterativeDerivation
    A: tuple  # rows of TruncSeries

    def __post_init__(self):
        A = tuple(tuple(row) for row in self.A)
        object.__setattr__(self, "A", A)
        n = len(A)
        if n == 0 or any(len(row) != n for row in A):
            raise InputError("module matrix must be square and non-empty")
        for i, row in enumerate(A):
            for j, entry in enumerate(row):
                if entry.order != self.theta.order or entry.p != self.theta.p:
                    raise OrderMismatch(f"entry ({i},{j}) does not match the ambient derivation")
                if entry[0] != (1 if i == j else 0):
                    raise InputError("A(0) must be the identity matrix")

    @property
    def rank(self) -> int:
        return len(self.A)

    @property
    def p(self) -> int:
        return self.theta.p

    @property
    def order(self) -> int:
        return self.theta.order

    @classmethod
    def trivial(cls, theta: IterativeDerivation, n: int) -> IDModuleMatrix:
        one = TruncSeries.one(theta.order, theta.p)
        zero = TruncSeries.zero(theta.order, theta.p)
        return cls(theta, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, theta: IterativeDerivation, entries) -> IDModuleMatrix:
        """Build from row-major entry texts (a flat list of n*n strings)."""
        entries = list(entries)
        n = int(round(len(entries) ** 0.5))
        if n * n != len(entries):
            raise InputError(f"{len(entries)} entries do not form a square matrix")
        series = [parse_series(e, theta.p, theta.order) for e in entries]
        return cls(theta, [series[i * n:(i + 1) * n] for i in range(n)])

    @classmethod
    def from_text(cls, text: str, theta: IterativeDerivation) -> IDModuleMatrix:
        """Rows separated by ';', entries by ','."""
        rows = [r for r in text.split(";")]
        entries = [e.strip() for r in rows for e in r.split(",")]
        if any(not e for e in entries):
            raise ParseError("empty matrix entry", text)
        n = len(rows)
        if len(entries) != n * n:
            raise InputError(f"matrix text has {n} rows but {len(entries)} entries")
        return cls.from_entries(theta, entries)

    @classmethod
    def from_dict(cls, d) -> IDModuleMatrix:
        theta = IterativeDerivation.from_text(d["theta"], int(d["p"]), int(d["order"]))
        m = cls.from_entries(theta, d["A"])
        if "n" in d and int(d["n"]) != m.rank:
            raise InputError("rank does not match the number of entries")
        return m

    @classmethod
    def from_basis_change(cls, theta: IterativeDerivation, phi) -> IDModuleMatrix:
        """The trivial module F^n rewritten in the basis given by the columns
        of phi: A = phi^{-1} . theta(phi).  Its constant vectors are
        phi^{-1} . c for c in F_p^n."""
        return change_basis(cls.trivial(theta, len(phi)), phi)

    def to_dict(self):
        return {
            "p": self.p, "order": self.order, "theta": str(self.theta.generator),
            "n": self.rank, "A": [str(e) for row in self.A for e in row],
        }

    def __str__(self):
        return "; ".join(", ".join(str(e) for e in row) for row in self.A)


def _vector(M: IDModuleMatrix, m):
    m = [_as_ratfun(x, M.p) for x in m]
    if len(m) != M.rank:
        raise InputError(f"vector has {len(m)} coordinates, module has rank {M.rank}")
    return m


def apply_module(M: IDModuleMatrix, m) -> list[TruncSeries]:
    """theta_M(m) = A(T) . theta(m), one series per coordinate."""
    m = _vector(M, m)
    images = [M.theta.apply(x) for x in m]
    zero = TruncSeries.zero(M.order, M.p)
    return [sum((M.A[i][j] * images[j] for j in range(M.rank) if m[j]), zero)
            for i in range(M.rank)]


def is_constant_vector(M: IDModuleMatrix, m) -> bool:
    m = _vector(M, m)
    return all(img == TruncSeries.constant(x, M.order) for img, x in zip(apply_module(M, m), m))


def _matmul_bi(X, Y, order, p):
    n = len(X)
    zero = TruncBiSeries.zero(order, p)
    return [[sum((X[i][k] * Y[k][j] for k in range(n)), zero) for j in range(n)]
            for i in range(n)]


def verify_module_iterativity(M: IDModuleMatrix) -> Report:
    """Check A(U+T) == A(U) . theta_U[[T]](A(T)) entrywise modulo total degree N."""
    n, theta = M.rank, M.theta
    A_u = [[TruncBiSeries.from_u(e.with_var("U")) for e in row] for row in M.A]
    A_mapped = [[map_coefficients(e, theta.apply_u) for e in row] for row in M.A]
    rhs = _matmul_bi(A_u, A_mapped, M.order, M.p)
    for i in range(n):
        for j in range(n):
            report = compare(substitute_u_plus_t(M.A[i][j]), rhs[i][j], M.order, (i, j))
            if not report.passed:
                return report
    return Report(True, M.order)


def transform_module(M: IDModuleMatrix, lam: Substitution) -> IDModuleMatrix:
    """Transport along lambda: entries become A_ij(P(T)) over lambda o theta."""
    if not lam.is_invertible():
        raise NotInvertible("module transport needs an invertible substitution")
    if lam.order != M.order:
        raise OrderMismatch(f"substitution order {lam.order} != module order {M.order}")
    theta_tilde = apply_substitution(M.theta, lam)
    A = [[series_compose(e, lam.series) for e in row] for row in M.A]
    return IDModuleMatrix(theta_tilde, A)


def intertwines(phi, M: IDModuleMatrix, N: IDModuleMatrix) -> bool:
    """Is v -> phi.v an ID-morphism M -> N?  (phi . A_M == A_N . theta(phi))"""
    if M.theta != N.theta:
        raise InputError("modules live over different derivations")
    theta = M.theta
    rows, cols = len(phi), len(phi[0])
    zero = TruncSeries.zero(M.order, M.p)
    theta_phi = [[theta.apply(phi[i][j]) for j in range(cols)] for i in range(rows)]
    for i in range(rows):
        for j in range(cols):
            left = sum((M.A[k][j].scale(phi[i][k]) for k in range(cols)), zero)
            right = sum((N.A[i][k] * theta_phi[k][j] for k in range(rows)), zero)
            if left != right:
                return False
    return True


def change_basis(M: IDModuleMatrix, phi) -> IDModuleMatrix:
    """Rewrite M in the basis e'_j = sum_i phi_ij e_i: A' = phi^{-1} . A . theta(phi).

    Coordinates transform as v = phi . w, so w = phi^{-1} v.
    """
    n, theta = M.rank, M.theta
    inv = matrix_inverse(phi)
    zero = TruncSeries.zero(M.order, M.p)
    theta_phi = [[theta.apply(phi[i][j]) for j in range(n)] for i in range(n)]
    left = [[sum((M.A[k][j].scale(inv[i][k]) for k in range(n) if inv[i][k]), zero)
             for j in range(n)] for i in range(n)]
    A = [[sum((left[i][k] * theta_phi[k][j] for k in range(n)), zero) for j in range(n)]
         for i in range(n)]
    return IDModuleMatrix(theta, A)


def matrix_inverse(a):
    """Inverse of a square matrix over F_p(s) by Gauss-Jordan elimination."""
    n = len(a)
    if not n:
        raise InputError("empty matrix")
    p = a[0][0].p
    one, zero = RationalFunction.constant(1, p), RationalFunction.constant(0, p)
    rows = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            raise NotInvertible("singular matrix")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[col])]
    return [row[n:] for row in rows]


def rank_one(text: str, p: int, order: int, theta: IterativeDerivation | None = None):
    theta = theta or standard_derivation(p, order)
    return IDModuleMatrix(theta, [[parse_series(text, p, order)]])
