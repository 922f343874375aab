"""Text and JSON forms of polynomials and surfaces.

Expression grammar (whitespace-insensitive, '*' optional):

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*'? factor)*
    factor   := rational | variable ('^' uint)? | '(' expr ')'
    rational := uint ('/' uint)?
    variable := 'x' uint     (indices start at 1)

Coefficients are integers or integer ratios; exponents are nonnegative
integers.  ``format_polynomial`` emits this grammar back, so exact-mode
polynomials round-trip through their printed form.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .polynomial import Poly, Scalar
from .quadric import InvalidQuadricError, NonhyperbolicQuadratic


class ParseError(ValueError):
    """Syntax or shape error in an input expression, with 1-based position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


_TOKEN_RE = re.compile(r"(?P<ws>\s+)|(?P<var>x(?P<idx>\d+))|(?P<int>\d+)|(?P<op>[-+*/^()])")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        if m.lastgroup != "ws":
            if m.group("var"):
                idx = int(m.group("idx"))
                if idx == 0:
                    raise ParseError("variable indices start at x1", pos + 1)
                tokens.append(("var", idx, pos + 1))
            elif m.group("int"):
                tokens.append(("int", int(m.group("int")), pos + 1))
            else:
                tokens.append(("op", m.group("op"), pos + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, object, int]], n: int):
        self.tokens = tokens
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] in ops

    def end_position(self) -> int:
        return self.tokens[-1][2] if self.tokens else 1

    def parse_expr(self) -> Poly:
        negate = False
        if self.at_op("+", "-"):
            negate = self.advance()[1] == "-"
        poly = self.parse_term()
        if negate:
            poly = -poly
        while self.at_op("+", "-"):
            op = self.advance()[1]
            rhs = self.parse_term()
            poly = poly - rhs if op == "-" else poly + rhs
        return poly

    def parse_term(self) -> Poly:
        poly = self.parse_factor()
        while True:
            if self.at_op("*"):
                self.advance()
                poly = poly * self.parse_factor()
            else:
                tok = self.peek()
                if tok is not None and (tok[0] in ("int", "var") or (tok[0] == "op" and tok[1] == "(")):
                    poly = poly * self.parse_factor()
                else:
                    return poly

    def parse_factor(self) -> Poly:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_position())
        kind, value, pos = tok
        if kind == "int":
            self.advance()
            num = value
            if self.at_op("/"):
                self.advance()
                den_tok = self.peek()
                if den_tok is None or den_tok[0] != "int":
                    raise ParseError(
                        "expected an integer denominator after '/'",
                        den_tok[2] if den_tok else self.end_position(),
                    )
                self.advance()
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return Poly.constant(self.n, Fraction(num, den_tok[1]))
            return Poly.constant(self.n, num)
        if kind == "var":
            self.advance()
            exponent = 1
            if self.at_op("^"):
                self.advance()
                exp_tok = self.peek()
                if exp_tok is None or exp_tok[0] != "int":
                    raise ParseError(
                        "expected a nonnegative integer exponent after '^'",
                        exp_tok[2] if exp_tok else self.end_position(),
                    )
                self.advance()
                exponent = exp_tok[1]
            alpha = tuple(exponent if j == value - 1 else 0 for j in range(self.n))
            return Poly.monomial(self.n, alpha)
        if kind == "op" and value == "(":
            self.advance()
            inner = self.parse_expr()
            if not self.at_op(")"):
                tok2 = self.peek()
                raise ParseError(
                    "expected ')'", tok2[2] if tok2 else self.end_position()
                )
            self.advance()
            return inner
        raise ParseError("expected a number, variable, or '('", pos)


def parse_polynomial(text: str, n: int | None = None) -> Poly:
    """Parse an expression into an exact Poly.

    The dimension is the largest variable index present, raised to ``n``
    when that is larger.  A constant expression with no dimension hint
    parses in dimension 1.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 1)
    max_var = max((t[1] for t in tokens if t[0] == "var"), default=0)
    dim = max(max_var, n or 0, 1)
    parser = _Parser(tokens, dim)
    poly = parser.parse_expr()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return poly


def _scalar_from_json(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected a rational value, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}: {exc}") from None
    raise ParseError(f"expected an integer or 'num/den' string, got {value!r}")


def parse_surface(source: str | Mapping, n: int | None = None) -> NonhyperbolicQuadratic:
    """Read a surface from an expression or a structured document.

    A mapping (or JSON text starting with '{') must carry keys "a", "c",
    "d" with integer or "num/den" entries.  Anything else is parsed as a
    polynomial of degree <= 2 with no cross terms and nonnegative square
    coefficients.
    """
    if isinstance(source, Mapping):
        doc = source
    else:
        stripped = source.strip()
        if stripped.startswith("{"):
            try:
                doc = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad surface document: {exc}") from None
        else:
            poly = parse_polynomial(source, n)
            return _surface_from_polynomial(poly)
    try:
        a = [_scalar_from_json(v) for v in doc["a"]]
        c = [_scalar_from_json(v) for v in doc["c"]]
        d = _scalar_from_json(doc["d"])
    except KeyError as exc:
        raise ParseError(f"surface document is missing key {exc}") from None
    if n is not None and n > len(a):
        a = a + [Fraction(0)] * (n - len(a))
        c = c + [Fraction(0)] * (n - len(c))
    return NonhyperbolicQuadratic(tuple(a), tuple(c), Fraction(d))


def _surface_from_polynomial(poly: Poly) -> NonhyperbolicQuadratic:
    n = max(poly.n, 2)
    poly = poly.extend(n)
    a = [Fraction(0)] * n
    c = [Fraction(0)] * n
    d = Fraction(0)
    for alpha, coeff in poly.terms.items():
        total = sum(alpha)
        if total > 2:
            raise InvalidQuadricError(
                f"surface polynomial has degree {total} term at {alpha}"
            )
        if total == 2:
            if max(alpha) == 1:
                raise InvalidQuadricError(
                    f"surface polynomial has a cross term at {alpha}"
                )
            a[alpha.index(2)] = Fraction(coeff)
        elif total == 1:
            c[alpha.index(1)] = Fraction(coeff)
        else:
            d = Fraction(coeff)
    return NonhyperbolicQuadratic(tuple(a), tuple(c), d)


def _format_coefficient(c: Scalar) -> str:
    if isinstance(c, float):
        return repr(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Poly) -> str:
    """Canonical text form, graded-lex from the top; grammar-compatible."""
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for alpha, c in p.sorted_terms():
        negative = c < 0
        mag = -c if negative else c
        factors = [
            f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}"
            for j, e in enumerate(alpha)
            if e
        ]
        if not factors:
            body = _format_coefficient(mag)
        elif mag == 1 and not isinstance(mag, float):
            body = "*".join(factors)
        else:
            body = "*".join([_format_coefficient(mag)] + factors)
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(chunks)


def scalar_to_json(c: Scalar) -> str:
    """Coefficient as a string: 'num/den' exact, repr for floats."""
    if isinstance(c, float):
        return repr(c)
    return f"{c.numerator}/{c.denominator}"


def scalar_from_json(text: str) -> Scalar:
    if re.fullmatch(r"-?\d+(/\d+)?", text):
        return Fraction(text)
    return float(text)


def poly_to_json_terms(p: Poly) -> list[dict]:
    """Term list [{"e": [...], "c": "num/den"}, ...] in canonical order."""
    return [
        {"e": list(alpha), "c": scalar_to_json(c)} for alpha, c in p.sorted_terms()
    ]


def poly_from_json_terms(terms: Iterable[Mapping], n: int) -> Poly:
    return Poly(n, {tuple(t["e"]): scalar_from_json(t["c"]) for t in terms})
