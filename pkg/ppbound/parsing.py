"""Polynomial input parsing and rendering for ppbound.

Grammar (whitespace is ignored):

    expr   := term (("+" | "-") term)*
    term   := unary ("*"? unary)*        implicit multiplication: 3z^2, (1/25)z
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := RATIONAL | "z" | "(" expr ")"

RATIONAL is an integer or an "a/b" literal; "/" appears only inside literals.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

from ppbound.errors import DegreeError, PolynomialParseError, SizeGuardError
from ppbound.polynomial import Polynomial

logger = logging.getLogger(__name__)

VARIABLE = "z"

# Larger inputs raise SizeGuardError
MAX_DEGREE = 32
MAX_EXPONENT = 256

TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<rational>\d+\s*/\s*\d+|\d+)|(?P<var>z)|(?P<op>[-+*^()]))"
)

# Sparse working representation: degree -> coefficient
Terms = dict[int, Fraction]


@dataclass(frozen=True)
class Token:
    kind: str  # "rational", "var", "op", "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """
    Split polynomial text into tokens.

    Raises:
        PolynomialParseError: On any character outside the grammar
    """
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = TOKEN_PATTERN.match(text, pos)
        if not match:
            raise PolynomialParseError(
                f"Unexpected character {text[pos]!r}", text=text, position=pos
            )
        kind = match.lastgroup or "op"
        start = match.start(kind)
        tokens.append(Token(kind, re.sub(r"\s+", "", match.group(kind)), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _add(a: Terms, b: Terms, sign: int = 1) -> Terms:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * v
    return {k: v for k, v in out.items() if v != 0}


def _mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, Fraction(0)) + u * v
    return {k: v for k, v in out.items() if v != 0}


def _pow(a: Terms, n: int) -> Terms:
    out: Terms = {0: Fraction(1)}
    for _ in range(n):
        out = _mul(out, a)
    return out


class PolynomialParser:
    """Recursive-descent parser for polynomials in z over Q."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Token | None = None) -> PolynomialParseError:
        token = token or self.current
        return PolynomialParseError(message, text=self.text, position=token.position)

    def _starts_atom(self) -> bool:
        token = self.current
        return token.kind in ("rational", "var") or token.text == "("

    def parse_terms(self) -> Terms:
        if self.current.kind == "end":
            raise self._error("Empty polynomial")
        terms = self._expr()
        if self.current.kind != "end":
            raise self._error(f"Unexpected {self.current.text!r}")
        return terms

    def _expr(self) -> Terms:
        terms = self._term()
        while self.current.text in ("+", "-"):
            sign = 1 if self._advance().text == "+" else -1
            terms = _add(terms, self._term(), sign)
        return terms

    def _term(self) -> Terms:
        terms = self._unary()
        while True:
            token = self.current
            if token.text == "*":
                self._advance()
            elif not self._starts_atom():
                return terms
            terms = self._check_degree(_mul(terms, self._unary()), token)

    def _unary(self) -> Terms:
        if self.current.text in ("+", "-"):
            sign = 1 if self._advance().text == "+" else -1
            return {k: sign * v for k, v in self._unary().items()}
        return self._power()

    def _power(self) -> Terms:
        base = self._atom()
        if self.current.text == "^":
            self._advance()
            token = self.current
            if token.kind != "rational" or "/" in token.text:
                raise self._error("Exponent must be a non-negative integer literal")
            exponent = int(token.text)
            if exponent > MAX_EXPONENT:
                raise SizeGuardError(
                    f"Exponent {exponent} at position {token.position} exceeds {MAX_EXPONENT}"
                )
            self._advance()
            self._check_degree({max(base, default=0) * exponent: Fraction(1)}, token)
            return _pow(base, exponent)
        return base

    def _check_degree(self, terms: Terms, token: Token) -> Terms:
        degree = max(terms, default=0)
        if degree > MAX_DEGREE:
            raise SizeGuardError(
                f"Degree {degree} near position {token.position} exceeds {MAX_DEGREE}"
            )
        return terms

    def _atom(self) -> Terms:
        token = self.current
        if token.kind == "rational":
            self._advance()
            num, _, den = token.text.partition("/")
            if den and int(den) == 0:
                raise self._error("Zero denominator", token)
            value = Fraction(int(num), int(den) if den else 1)
            return {0: value} if value != 0 else {}
        if token.kind == "var":
            self._advance()
            return {1: Fraction(1)}
        if token.text == "(":
            self._advance()
            inner = self._expr()
            if self.current.text != ")":
                raise self._error("Expected ')'")
            self._advance()
            return inner
        if token.kind == "end":
            raise self._error("Unexpected end of input", token)
        raise self._error(f"Unexpected {token.text!r}", token)


def parse_poly(text: str) -> Polynomial:
    """
    Parse polynomial text into a Polynomial.

    Args:
        text: Polynomial in z, e.g. "z^2 - 29/16" or "z^3 - (1/25)z"

    Returns:
        Dense Polynomial

    Raises:
        PolynomialParseError: On a syntax error (with position)
        DegreeError: If the degree is below 2
        SizeGuardError: If an exponent or the degree exceeds its cap
    """
    terms = PolynomialParser(text).parse_terms()
    degree = max(terms, default=0)
    if degree < 2:
        raise DegreeError(
            f"Polynomial {text!r} has degree {degree if terms else 0}; need >= 2",
            text=text,
        )
    coeffs = tuple(terms.get(i, Fraction(0)) for i in range(degree + 1))
    logger.debug(f"Parsed {text!r} -> {coeffs}")
    return Polynomial(coeffs)


def validate_poly(text: str) -> tuple[bool, str | None]:
    """
    Validate polynomial text without raising.

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        parse_poly(text)
    except (PolynomialParseError, SizeGuardError) as e:
        return False, str(e)
    return True, None


def _coefficient_text(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c})"


def render(poly: Polynomial) -> str:
    """
    Render a Polynomial in the input grammar, highest degree first.

    The output always reparses to an equal Polynomial.
    """
    parts: list[str] = []
    for k in range(poly.degree, -1, -1):
        c = poly.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if k == 0:
            body = str(magnitude)
        else:
            power = VARIABLE if k == 1 else f"{VARIABLE}^{k}"
            body = power if magnitude == 1 else f"{_coefficient_text(magnitude)}{power}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)
