"""Ordinal arithmetic in Cantor normal form.

An ordinal is stored as a sum  w^e1*c1 + ... + w^ek*ck  with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients.  This is enough for every Cantor-Bendixson rank and
derived-sequence stage the rest of the library produces: exponent
nesting is capped at depth 3, which covers ordinals well past w^(w*k).

Only the operations the library actually needs are provided: comparison,
addition, point classification (zero / successor / limit), division by w
on the left, and multiplication by w on the left.  General ordinal
multiplication is deliberately absent.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from enum import Enum

MAX_DEPTH = 3


class OrdinalDepthError(ValueError):
    """Raised when an ordinal would exceed the supported nesting depth."""


class NotDivisible(ArithmeticError):
    """Raised when dividing a successor ordinal by w on the left."""


class PointKind(Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@functools.total_ordering
@dataclass(frozen=True)
class Ordinal:
    """An ordinal below w^(w^w), in Cantor normal form.

    ``terms`` is a tuple of (exponent, coefficient) pairs with strictly
    decreasing exponents and coefficients >= 1.  The empty tuple is 0.
    """

    terms: tuple[tuple[Ordinal, int], ...] = ()

    def __post_init__(self) -> None:
        for exp, coeff in self.terms:
            if coeff < 1:
                raise ValueError(f"coefficient must be positive, got {coeff}")
        for (e1, _), (e2, _) in zip(self.terms, self.terms[1:]):
            if not e1 > e2:
                raise ValueError("exponents must be strictly decreasing")
        if self.depth() > MAX_DEPTH:
            raise OrdinalDepthError(
                f"ordinal exceeds exponent nesting depth {MAX_DEPTH}"
            )

    # -- construction ------------------------------------------------

    @staticmethod
    def from_int(n: int) -> Ordinal:
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        if n == 0:
            return ZERO
        return Ordinal(((ZERO, n),))

    @staticmethod
    def omega_power(exp: Ordinal | int, coeff: int = 1) -> Ordinal:
        """The ordinal w^exp * coeff."""
        if isinstance(exp, int):
            exp = Ordinal.from_int(exp)
        if coeff == 0:
            return ZERO
        return Ordinal(((exp, coeff),))

    # -- structure ---------------------------------------------------

    def depth(self) -> int:
        if not self.terms:
            return 0
        return 1 + max(exp.depth() for exp, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def as_int(self) -> int:
        """The integer value of a finite ordinal."""
        if not self.terms:
            return 0
        if not self.is_finite():
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1]

    def classify(self) -> PointKind:
        """Whether this ordinal is zero, a successor, or a limit."""
        if not self.terms:
            return PointKind.ZERO
        if self.terms[-1][0].is_zero():
            return PointKind.SUCCESSOR
        return PointKind.LIMIT

    def least_exponent(self) -> Ordinal:
        """The exponent of the last CNF term (undefined for 0)."""
        if not self.terms:
            raise ValueError("0 has no CNF terms")
        return self.terms[-1][0]

    # -- order -------------------------------------------------------

    def __lt__(self, other: Ordinal) -> bool:
        return compare(self, other) < 0

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: Ordinal) -> Ordinal:
        """Ordinal addition.  Not commutative: 1 + w == w."""
        if not other.terms:
            return self
        lead_exp, lead_coeff = other.terms[0]
        prefix = []
        merged = False
        for exp, coeff in self.terms:
            if exp > lead_exp:
                prefix.append((exp, coeff))
            elif exp == lead_exp:
                prefix.append((exp, coeff + lead_coeff))
                merged = True
                break
            else:
                break
        if merged:
            return Ordinal(tuple(prefix) + other.terms[1:])
        return Ordinal(tuple(prefix) + other.terms)

    def successor(self) -> Ordinal:
        return self + ONE

    def predecessor(self) -> Ordinal:
        """The ordinal directly below a successor."""
        if self.classify() is not PointKind.SUCCESSOR:
            raise ValueError(f"{self} is not a successor")
        exp, coeff = self.terms[-1]
        head = self.terms[:-1]
        if coeff > 1:
            return Ordinal(head + ((exp, coeff - 1),))
        return Ordinal(head)

    # -- rendering ---------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            parts.append(_render_term(exp, coeff))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Ordinal[{self}]"


ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal(((ONE, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: -1, 0, or 1."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def omega_quotient(a: Ordinal) -> Ordinal:
    """The unique m with w*m == a, for a zero or limit ordinal.

    In CNF this strips one w from the left of every term: w^e*c maps to
    w^(e')*c where 1 + e' == e.  Finite exponents drop by one; infinite
    exponents are unchanged.
    """
    if a.classify() is PointKind.SUCCESSOR:
        raise NotDivisible(f"{a} is a successor ordinal")
    terms = []
    for exp, coeff in a.terms:
        if exp.is_finite():
            terms.append((Ordinal.from_int(exp.as_int() - 1), coeff))
        else:
            terms.append((exp, coeff))
    return Ordinal(tuple(terms))


def omega_times(a: Ordinal) -> Ordinal:
    """The left product w*a, by prepending w to every CNF term."""
    terms = []
    for exp, coeff in a.terms:
        terms.append((ONE + exp, coeff))
    return Ordinal(tuple(terms))


# -- text format -----------------------------------------------------

_TOKEN = re.compile(r"\s*(w|\d+|\^|\*|\+|\(|\))")


def _render_term(exp: Ordinal, coeff: int) -> str:
    if exp.is_zero():
        return str(coeff)
    if exp == ONE:
        base = "w"
    elif exp.is_finite():
        base = f"w^{exp.as_int()}"
    elif exp == OMEGA:
        base = "w^w"
    else:
        base = f"w^({exp})"
    if coeff == 1:
        return base
    return f"{base}*{coeff}"


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ValueError(f"bad ordinal syntax near {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of ordinal expression")
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def parse_sum(self) -> Ordinal:
        total = self.parse_term()
        while self.peek() == "+":
            self.take("+")
            total = total + self.parse_term()
        return total

    def parse_term(self) -> Ordinal:
        tok = self.take()
        if tok.isdigit():
            return Ordinal.from_int(int(tok))
        if tok != "w":
            raise ValueError(f"expected term, got {tok!r}")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            exp = self.parse_exponent()
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            coeff = int(self.take())
        return Ordinal.omega_power(exp, coeff)

    def parse_exponent(self) -> Ordinal:
        tok = self.peek()
        if tok == "(":
            self.take("(")
            inner = self.parse_sum()
            self.take(")")
            return inner
        if tok == "w":
            self.take("w")
            return OMEGA
        if tok is not None and tok.isdigit():
            self.take()
            return Ordinal.from_int(int(tok))
        raise ValueError(f"expected exponent, got {tok!r}")


def parse_ordinal(text: str) -> Ordinal:
    """Parse the w-notation, e.g. ``w^2*3 + w*2 + 5``."""
    parser = _Parser(_tokenize(text))
    value = parser.parse_sum()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens in ordinal: {text!r}")
    return value
