"""Rational-function expressions in named parameters.

A ParamExpr is an immutable expression tree over rational literals,
parameter identifiers, +, -, *, /, unary minus and integer powers.  Exact
evaluation at a Fraction binding either yields a Fraction or raises
EvaluationError (division by zero).  For structural equality every
expression normalizes to a ratio of multivariate polynomials with Fraction
coefficients; two expressions are equivalent iff cross-multiplication of
the normal forms agrees.

Division by an expression that is *identically* zero is rejected at
construction time; division by an expression that merely vanishes at some
bindings is legal and guarded at evaluation time.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Union

from ..errors import EvaluationError, ExprError

Q = Fraction

# A monomial is a sorted tuple of (name, exponent>0); a Poly maps monomials
# to nonzero Fraction coefficients.
Monomial = tuple[tuple[str, int], ...]
PolyDict = dict[Monomial, Fraction]

_EMPTY: Monomial = ()


def _poly_const(c: Fraction) -> PolyDict:
    return {} if c == 0 else {_EMPTY: c}


def _poly_var(name: str) -> PolyDict:
    return {((name, 1),): Q(1)}


def _poly_add(a: PolyDict, b: PolyDict) -> PolyDict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Q(0)) + c
        if s == 0:
            out.pop(m, None)
        else:
            out[m] = s
    return out


def _poly_neg(a: PolyDict) -> PolyDict:
    return {m: -c for m, c in a.items()}


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


def _poly_mul(a: PolyDict, b: PolyDict) -> PolyDict:
    out: PolyDict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            s = out.get(m, Q(0)) + ca * cb
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def _poly_pow(a: PolyDict, n: int) -> PolyDict:
    out = _poly_const(Q(1))
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _poly_key(a: PolyDict):
    return tuple(sorted((m, c) for m, c in a.items()))


class ParamExpr:
    """Immutable expression tree; build via parse_expr/const/var or operators."""

    __slots__ = ("kind", "args", "_frac")

    def __init__(self, kind: str, args: tuple):
        self.kind = kind
        self.args = args
        self._frac = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(value) -> "ParamExpr":
        return ParamExpr("num", (Q(value),))

    @staticmethod
    def var(name: str) -> "ParamExpr":
        return ParamExpr("var", (name,))

    # -- operators -------------------------------------------------------

    def _coerce(self, other) -> "ParamExpr":
        if isinstance(other, ParamExpr):
            return other
        return ParamExpr.const(other)

    def __add__(self, other):
        return ParamExpr("add", (self, self._coerce(other)))

    def __radd__(self, other):
        return self._coerce(other) + self

    def __sub__(self, other):
        return ParamExpr("sub", (self, self._coerce(other)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return ParamExpr("mul", (self, self._coerce(other)))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_identically_zero():
            raise ExprError("division by identically zero expression")
        return ParamExpr("div", (self, other))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return ParamExpr("neg", (self,))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ExprError("exponent must be an integer")
        if n < 0 and self.is_identically_zero():
            raise ExprError("negative power of identically zero expression")
        return ParamExpr("pow", (self, n))

    # -- queries ----------------------------------------------------------

    def parameters(self) -> frozenset[str]:
        if self.kind == "num":
            return frozenset()
        if self.kind == "var":
            return frozenset((self.args[0],))
        if self.kind == "pow":
            return self.args[0].parameters()
        return frozenset().union(*(a.parameters() for a in self.args))

    def evaluate(self, binding: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a full binding; raises EvaluationError on 1/0."""
        k = self.kind
        if k == "num":
            return self.args[0]
        if k == "var":
            name = self.args[0]
            if name not in binding:
                raise EvaluationError("unbound parameter %r" % name)
            return Q(binding[name])
        if k == "add":
            return self.args[0].evaluate(binding) + self.args[1].evaluate(binding)
        if k == "sub":
            return self.args[0].evaluate(binding) - self.args[1].evaluate(binding)
        if k == "mul":
            return self.args[0].evaluate(binding) * self.args[1].evaluate(binding)
        if k == "div":
            den = self.args[1].evaluate(binding)
            if den == 0:
                raise EvaluationError("division by zero")
            return self.args[0].evaluate(binding) / den
        if k == "neg":
            return -self.args[0].evaluate(binding)
        if k == "pow":
            base = self.args[0].evaluate(binding)
            n = self.args[1]
            if n < 0 and base == 0:
                raise EvaluationError("zero raised to a negative power")
            return base ** n
        raise ExprError("unknown node %r" % k)

    def as_fraction(self) -> tuple[PolyDict, PolyDict]:
        """Normal form (numerator, denominator) as polynomial dicts."""
        if self._frac is not None:
            return self._frac
        k = self.kind
        if k == "num":
            nf = (_poly_const(self.args[0]), _poly_const(Q(1)))
        elif k == "var":
            nf = (_poly_var(self.args[0]), _poly_const(Q(1)))
        elif k in ("add", "sub"):
            n1, d1 = self.args[0].as_fraction()
            n2, d2 = self.args[1].as_fraction()
            if k == "sub":
                n2 = _poly_neg(n2)
            nf = (_poly_add(_poly_mul(n1, d2), _poly_mul(n2, d1)), _poly_mul(d1, d2))
        elif k == "mul":
            n1, d1 = self.args[0].as_fraction()
            n2, d2 = self.args[1].as_fraction()
            nf = (_poly_mul(n1, n2), _poly_mul(d1, d2))
        elif k == "div":
            n1, d1 = self.args[0].as_fraction()
            n2, d2 = self.args[1].as_fraction()
            if not n2:
                raise ExprError("division by identically zero expression")
            nf = (_poly_mul(n1, d2), _poly_mul(d1, n2))
        elif k == "neg":
            n1, d1 = self.args[0].as_fraction()
            nf = (_poly_neg(n1), d1)
        elif k == "pow":
            n1, d1 = self.args[0].as_fraction()
            n = self.args[1]
            if n >= 0:
                nf = (_poly_pow(n1, n), _poly_pow(d1, n))
            else:
                if not n1:
                    raise ExprError("negative power of identically zero expression")
                nf = (_poly_pow(d1, -n), _poly_pow(n1, -n))
        else:
            raise ExprError("unknown node %r" % k)
        self._frac = nf
        return nf

    def is_identically_zero(self) -> bool:
        num, _ = self.as_fraction()
        return not num

    def equivalent(self, other: "ParamExpr") -> bool:
        """True iff the two rational functions agree identically."""
        n1, d1 = self.as_fraction()
        n2, d2 = other.as_fraction()
        return _poly_key(_poly_mul(n1, d2)) == _poly_key(_poly_mul(n2, d1))

    def constant_value(self) -> Fraction | None:
        """The expression's value when it involves no parameters, else None."""
        if self.parameters():
            return None
        try:
            return self.evaluate({})
        except EvaluationError:
            # constant like 1/(2-2): reachable only through arithmetic on
            # consts; treat as non-constant so callers surface it at use.
            return None

    def __repr__(self):
        return "ParamExpr(%s)" % format_expr(self)

    def __eq__(self, other):
        return isinstance(other, ParamExpr) and self.kind == other.kind and self.args == other.args

    def __hash__(self):
        return hash((self.kind, self.args))


ZERO_EXPR = ParamExpr.const(0)
ONE_EXPR = ParamExpr.const(1)


def format_expr(e: ParamExpr) -> str:
    """Parseable text form (fully parenthesized where needed)."""
    k = e.kind
    if k == "num":
        v = e.args[0]
        return str(v) if v >= 0 else "(%s)" % v
    if k == "var":
        return e.args[0]
    if k == "add":
        return "(%s+%s)" % (format_expr(e.args[0]), format_expr(e.args[1]))
    if k == "sub":
        return "(%s-%s)" % (format_expr(e.args[0]), format_expr(e.args[1]))
    if k == "mul":
        return "(%s*%s)" % (format_expr(e.args[0]), format_expr(e.args[1]))
    if k == "div":
        return "(%s/%s)" % (format_expr(e.args[0]), format_expr(e.args[1]))
    if k == "neg":
        return "(-%s)" % format_expr(e.args[0])
    if k == "pow":
        return "(%s^%d)" % (format_expr(e.args[0]), e.args[1])
    raise ExprError("unknown node %r" % k)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[str]:
    tokens = []
    text = text.strip()
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprError("bad character %r in expression %r" % (text[pos], text))
        tokens.append(m.group(m.lastgroup))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent: expr -> term (+|- term)*, term -> factor (*|/ factor)*,
    factor -> (-)* atom (^ int)*, atom -> int | name | ( expr )."""

    def __init__(self, tokens: list[str], text: str):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of expression %r" % self.text)
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.take()
        if got != tok:
            raise ExprError("expected %r, got %r in %r" % (tok, got, self.text))

    def parse(self) -> ParamExpr:
        e = self.expr()
        if self.peek() is not None:
            raise ExprError("trailing input %r in %r" % (self.peek(), self.text))
        return e

    def expr(self) -> ParamExpr:
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> ParamExpr:
        e = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            e = e * rhs if op == "*" else e / rhs
        return e

    def factor(self) -> ParamExpr:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        e = self.atom()
        while self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.take()
            if not tok.isdigit():
                raise ExprError("integer exponent expected in %r" % self.text)
            e = e ** (-int(tok) if neg else int(tok))
        return e

    def atom(self) -> ParamExpr:
        tok = self.take()
        if tok == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.isdigit():
            return ParamExpr.const(int(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return ParamExpr.var(tok)
        raise ExprError("unexpected token %r in %r" % (tok, self.text))


def parse_expr(text: str) -> ParamExpr:
    """Parse `a/b` rationals, identifiers, + - * / ^ and parentheses."""
    return _Parser(_tokenize(text), text).parse()


def parse_rational(text: str) -> Fraction:
    """Parse a constant expression to an exact rational."""
    value = parse_expr(text).constant_value()
    if value is None:
        raise ExprError("expected a constant, got %r" % text)
    return value


ExprLike = Union[ParamExpr, Fraction, int, str]


def as_expr(x: ExprLike) -> ParamExpr:
    if isinstance(x, ParamExpr):
        return x
    if isinstance(x, str):
        return parse_expr(x)
    return ParamExpr.const(x)
