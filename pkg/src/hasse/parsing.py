"""Text syntax shared by rational functions, series and bivariate series.

Grammar (whitespace is ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' ['-'] INT]
    atom   := INT | 's' | 'T' | 'U' | '(' expr ')'

Expressions are parsed once into a small tuple AST and then evaluated in
whatever ring the caller asks for, so all three carriers share one parser.
"""

from __future__ import annotations

import re

from .errors import DivisionByZero, HasseError, NotInvertible, ParseError

_TOKEN = re.compile(r"(\d+)|([A-Za-z_]\w*)|(\S)")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        start = m.start()
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append(("op", ch, start))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables):
        self.text = text
        self.variables = variables
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise ParseError(f"expected {value!r}", self.text, tok[2])
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return node

    def expr(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            node = self.term()
            if tok[1] == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                node = ("add" if tok[1] == "+" else "sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                node = ("mul" if tok[1] == "*" else "div", node, self.factor(), tok[2])
            else:
                return node

    def factor(self):
        node = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "int":
                raise ParseError("exponent must be an integer literal", self.text, tok[2])
            node = ("pow", node, sign * int(tok[1]), tok[2])
        return node

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            return ("int", int(value))
        if kind == "name":
            if value not in self.variables:
                raise ParseError(f"unknown variable {value!r}", self.text, pos)
            return ("var", value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", self.text, pos)


def parse_ast(text: str, variables=("s", "T", "U")):
    if not isinstance(text, str):
        raise ParseError("expression must be a string")
    return _Parser(text, variables).parse()


def evaluate(node, ring, text=""):
    """Evaluate an AST in ``ring``.

    ``ring`` provides ``const(int)``, ``var(name)``, ``inverse(x)`` and
    ring elements supporting ``+ - *`` and integer powers.
    """
    op = node[0]
    if op == "int":
        return ring.const(node[1])
    if op == "var":
        return ring.var(node[1])
    if op == "neg":
        return -evaluate(node[1], ring, text)
    if op in ("add", "sub", "mul"):
        a = evaluate(node[1], ring, text)
        b = evaluate(node[2], ring, text)
        return a + b if op == "add" else a - b if op == "sub" else a * b
    if op == "div":
        a = evaluate(node[1], ring, text)
        b = evaluate(node[2], ring, text)
        try:
            return a * ring.inverse(b)
        except (DivisionByZero, NotInvertible) as exc:
            raise ParseError(f"cannot divide: {exc}", text, node[3]) from None
    if op == "pow":
        base = evaluate(node[1], ring, text)
        e = node[2]
        if e < 0:
            try:
                base = ring.inverse(base)
            except (DivisionByZero, NotInvertible) as exc:
                raise ParseError(f"cannot invert: {exc}", text, node[3]) from None
            e = -e
        return ring.power(base, e)
    raise AssertionError(op)


class _RatfunRing:
    def __init__(self, p):
        self.p = p

    def const(self, c):
        from .arith import RationalFunction
        return RationalFunction.constant(c, self.p)

    def var(self, name):
        from .arith import RationalFunction
        if name != "s":
            raise ParseError(f"variable {name!r} not allowed in a rational function")
        return RationalFunction.s(self.p)

    def inverse(self, x):
        return x.inverse()

    def power(self, x, e):
        return x ** e


def parse_ratfun(text: str, p: int):
    from .arith import check_prime
    check_prime(p)
    try:
        return evaluate(parse_ast(text, ("s",)), _RatfunRing(p), text)
    except ParseError:
        raise
    except HasseError as exc:
        raise ParseError(str(exc), text) from None


# -- printing -----------------------------------------------------------------

def _mono(c: int, var: str, k: int) -> str:
    if k == 0:
        return str(c)
    v = var if k == 1 else f"{var}^{k}"
    return v if c == 1 else f"{c}*{v}"


def poly_text(coeffs, var: str = "s") -> str:
    if not coeffs:
        return "0"
    terms = [_mono(c, var, k) for k, c in reversed(list(enumerate(coeffs))) if c]
    return " + ".join(terms)


def _is_atomic(coeffs) -> bool:
    return sum(1 for c in coeffs if c) <= 1


def ratfun_text(f) -> str:
    num = poly_text(f.num)
    if f.is_polynomial():
        return num
    if not _is_atomic(f.num):
        num = f"({num})"
    den = poly_text(f.den)
    if not _is_atomic(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def coefficient_text(c) -> str:
    """Text for a coefficient that will be multiplied by a monomial."""
    text = ratfun_text(c)
    if not c.is_polynomial() or not _is_atomic(c.num):
        return f"({text})"
    return text


def monomial_text(c, powers) -> str:
    """``c * prod(var^k)`` for ``powers`` a list of (var, k)."""
    mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in powers if k)
    if not mono:
        return ratfun_text(c)
    if c.is_one():
        return mono
    return f"{coefficient_text(c)}*{mono}"
