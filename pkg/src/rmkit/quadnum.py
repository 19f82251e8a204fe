"""Exact arithmetic on quadratic irrationals ``(p + q*sqrt(d))/r``.

Values are immutable and always held in canonical form: ``d`` squarefree,
``r > 0``, ``gcd(p, q, r) = 1`` and ``q != 0``.  Imaginary values carry a
flag and stand for ``(p + q*sqrt(-d))/r``; they are used formally (trace,
norm, minimal polynomial) and have no ordering.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

from sympy import factorint

from .errors import (
    DegenerateMatrix,
    DivisionByZero,
    NonCanonicalRadicand,
    ParseError,
    RationalValue,
)
from .matrix import Matrix2Z

Rational = Union[int, Fraction]


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, core)`` with ``n = s**2 * core`` and ``core`` squarefree."""
    if n <= 0:
        raise ValueError("squarefree_decompose needs a positive integer")
    s, core = 1, 1
    for prime, e in factorint(n).items():
        s *= prime ** (e // 2)
        if e % 2:
            core *= prime
    return s, core


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_decompose(n)[0] == 1


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _reduce(p: int, q: int, r: int, d: int, imaginary: bool) -> QuadraticIrrational:
    # d is already squarefree here
    if r == 0:
        raise DivisionByZero("zero denominator")
    if q == 0:
        raise RationalValue(f"value {Fraction(p, r)} is rational")
    if r < 0:
        p, q, r = -p, -q, -r
    g = math.gcd(math.gcd(p, q), r)
    return QuadraticIrrational(p // g, q // g, r // g, d, imaginary)


def canonicalize(p: int, q: int, r: int, d: int, imaginary: bool = False) -> QuadraticIrrational:
    """Bring ``(p + q*sqrt(d))/r`` (or ``sqrt(-d)`` when imaginary) to canonical form."""
    if r == 0:
        raise DivisionByZero("zero denominator")
    if d <= 0:
        raise NonCanonicalRadicand(f"radicand must be positive, got {d}; use the imaginary flag")
    if q == 0:
        raise RationalValue(f"value {Fraction(p, r)} is rational")
    s, core = squarefree_decompose(d)
    if core == 1:
        if imaginary:
            raise NonCanonicalRadicand(f"sqrt(-{d}) reduces to a Gaussian integer multiple of i")
        raise RationalValue(f"sqrt({d}) is an integer; value is rational")
    return _reduce(p, q * s, r, core, imaginary)


@dataclass(frozen=True)
class IntPoly2:
    """Primitive integral quadratic ``A*x**2 + B*x + C`` with ``A > 0``."""

    A: int
    B: int
    C: int

    @classmethod
    def primitive(cls, A: int, B: int, C: int) -> IntPoly2:
        g = math.gcd(math.gcd(A, B), C)
        if g == 0:
            raise ValueError("zero polynomial")
        if A < 0 or (A == 0 and (B < 0 or (B == 0 and C < 0))):
            g = -g
        return cls(A // g, B // g, C // g)

    def __iter__(self):
        return iter((self.A, self.B, self.C))

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def evaluate(self, x: QuadraticIrrational) -> tuple[Fraction, Fraction]:
        """Exact ``A x^2 + B x + C`` split as ``(rational part, coefficient of sqrt)``."""
        s = -1 if x.imaginary else 1
        p, q, r, d = x.p, x.q, x.r, x.d
        rat = Fraction(self.A * (p * p + s * q * q * d), r * r) + Fraction(self.B * p, r) + self.C
        irr = Fraction(self.A * 2 * p * q, r * r) + Fraction(self.B * q, r)
        return rat, irr

    def has_root(self, x: QuadraticIrrational) -> bool:
        return self.evaluate(x) == (0, 0)

    def roots(self) -> tuple[QuadraticIrrational, QuadraticIrrational]:
        return quadratic_root(self.A, self.B, self.C, True), quadratic_root(self.A, self.B, self.C, False)


def quadratic_root(A: int, B: int, C: int, plus: bool = True) -> QuadraticIrrational:
    """Root ``(-B*sgn(A) ± sqrt(B^2 - 4AC)) / (2|A|)`` of ``A x^2 + B x + C``.

    ``plus`` selects the larger real root.  A negative discriminant gives the
    formal imaginary root.
    """
    if A == 0:
        raise DegenerateMatrix("leading coefficient is zero")
    # dividing out the content keeps the radicand small; period matrices of long
    # expansions carry a huge common factor that would otherwise be factored
    g = math.gcd(math.gcd(A, B), C)
    A, B, C = A // g, B // g, C // g
    disc = B * B - 4 * A * C
    sa = _sign(A)
    q = 1 if plus else -1
    if disc < 0:
        return canonicalize(-B * sa, q, 2 * abs(A), -disc, imaginary=True)
    return canonicalize(-B * sa, q, 2 * abs(A), disc)


def _as_fraction(y) -> Fraction:
    if isinstance(y, (int, Fraction)):
        return Fraction(y)
    raise TypeError(f"expected int or Fraction, got {type(y).__name__}")


def _sign_surd(alpha: Fraction, beta: Fraction, m: int) -> int:
    """Exact sign of ``alpha + beta*sqrt(m)`` for ``m >= 0``."""
    sa, sb = _sign(alpha), _sign(beta)
    if sb == 0 or m == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: square both sides
    return sa * _sign(alpha * alpha - beta * beta * m)


def _sign_two_surds(a: Fraction, b: Fraction, m1: int, c: Fraction, m2: int) -> int:
    """Exact sign of ``a + b*sqrt(m1) + c*sqrt(m2)``."""
    if c == 0:
        return _sign_surd(a, b, m1)
    if b == 0:
        return _sign_surd(a, c, m2)
    su = _sign_surd_pair(b, m1, c, m2)
    sa = _sign(a)
    if sa == 0:
        return su
    if su == 0 or sa == su:
        return sa
    # a^2 vs (b sqrt m1 + c sqrt m2)^2 = b^2 m1 + c^2 m2 + 2bc sqrt(m1 m2)
    return sa * _sign_surd(a * a - b * b * m1 - c * c * m2, -2 * b * c, m1 * m2)


def _sign_surd_pair(b: Fraction, m1: int, c: Fraction, m2: int) -> int:
    """Exact sign of ``b*sqrt(m1) + c*sqrt(m2)``."""
    sb, sc = _sign(b), _sign(c)
    if sb == 0 or m1 == 0:
        return sc if m2 else 0
    if sc == 0 or m2 == 0 or sb == sc:
        return sb
    return sb * _sign(b * b * m1 - c * c * m2)


@total_ordering
@dataclass(frozen=True)
class QuadraticIrrational:
    """Canonical ``(p + q*sqrt(d))/r``; build through :func:`canonicalize` or :meth:`parse`."""

    p: int
    q: int
    r: int
    d: int
    imaginary: bool = False

    def __post_init__(self):
        if self.r <= 0 or self.q == 0 or self.d <= 1:
            raise NonCanonicalRadicand(f"non-canonical fields {self.p, self.q, self.r, self.d}")
        if math.gcd(math.gcd(self.p, self.q), self.r) != 1:
            raise NonCanonicalRadicand(f"fields {self.p, self.q, self.r} share a factor")

    # construction -----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> QuadraticIrrational:
        return parse_quadratic(text)

    def conjugate(self) -> QuadraticIrrational:
        return QuadraticIrrational(self.p, -self.q, self.r, self.d, self.imaginary)

    # invariants -------------------------------------------------------

    def minpoly(self) -> IntPoly2:
        # (r x - p)^2 = ±q^2 d
        s = -1 if self.imaginary else 1
        r, p, q, d = self.r, self.p, self.q, self.d
        return IntPoly2.primitive(r * r, -2 * p * r, p * p - s * q * q * d)

    def trace_norm(self) -> tuple[Fraction, Fraction]:
        s = -1 if self.imaginary else 1
        trace = Fraction(2 * self.p, self.r)
        norm = Fraction(self.p * self.p - s * self.q * self.q * self.d, self.r * self.r)
        return trace, norm

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def surd_coefficient(self) -> Fraction:
        return Fraction(self.q, self.r)

    # arithmetic -------------------------------------------------------

    def _same_field(self, other: QuadraticIrrational) -> None:
        if other.d != self.d or other.imaginary != self.imaginary:
            raise ValueError(f"radicands differ: {self} and {other}")

    def __neg__(self) -> QuadraticIrrational:
        return QuadraticIrrational(-self.p, -self.q, self.r, self.d, self.imaginary)

    def __add__(self, other) -> QuadraticIrrational:
        if isinstance(other, QuadraticIrrational):
            self._same_field(other)
            r = self.r * other.r
            return _reduce(self.p * other.r + other.p * self.r, self.q * other.r + other.q * self.r,
                           r, self.d, self.imaginary)
        if isinstance(other, (int, Fraction)):
            y = Fraction(other)
            return _reduce(self.p * y.denominator + y.numerator * self.r, self.q * y.denominator,
                           self.r * y.denominator, self.d, self.imaginary)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> QuadraticIrrational:
        return self + (-other)

    def __rsub__(self, other) -> QuadraticIrrational:
        return (-self) + other

    def __mul__(self, other) -> QuadraticIrrational:
        if isinstance(other, QuadraticIrrational):
            self._same_field(other)
            s = -1 if self.imaginary else 1
            return _reduce(self.p * other.p + s * self.q * other.q * self.d,
                           self.p * other.q + self.q * other.p,
                           self.r * other.r, self.d, self.imaginary)
        if isinstance(other, (int, Fraction)):
            y = Fraction(other)
            if y == 0:
                raise RationalValue("product with zero is rational")
            return _reduce(self.p * y.numerator, self.q * y.numerator, self.r * y.denominator,
                           self.d, self.imaginary)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> QuadraticIrrational:
        # 1/x = conj(x) / N(x)
        _, norm = self.trace_norm()
        return self.conjugate() * (1 / norm)

    def __truediv__(self, other) -> QuadraticIrrational:
        if isinstance(other, QuadraticIrrational):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other) -> QuadraticIrrational:
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    # ordering ---------------------------------------------------------

    def __lt__(self, other) -> bool:
        if not isinstance(other, (QuadraticIrrational, int, Fraction)):
            return NotImplemented
        return compare(self, other) < 0

    def floor(self) -> int:
        """Exact floor of a real value."""
        if self.imaginary:
            raise TypeError("imaginary values have no floor")
        # q*sqrt(d) lies strictly between two consecutive integers
        s = math.isqrt(self.q * self.q * self.d)
        lower = s if self.q > 0 else -s - 1
        return (self.p + lower) // self.r

    def __float__(self) -> float:
        if self.imaginary:
            raise TypeError("imaginary value has no float image")
        return self.p / self.r + (self.q / self.r) * math.sqrt(self.d)

    def __complex__(self) -> complex:
        if not self.imaginary:
            return complex(float(self))
        return complex(self.p / self.r, self.q / self.r * math.sqrt(self.d))

    def __str__(self) -> str:
        return format_quadratic(self)


def compare(x: QuadraticIrrational, y: QuadraticIrrational | Rational) -> int:
    """Exact three-way comparison of real values: -1, 0 or 1."""
    if x.imaginary or (isinstance(y, QuadraticIrrational) and y.imaginary):
        raise TypeError("only real values are ordered")
    if isinstance(y, QuadraticIrrational):
        if y.d == x.d:
            a = Fraction(x.p, x.r) - Fraction(y.p, y.r)
            b = Fraction(x.q, x.r) - Fraction(y.q, y.r)
            return _sign_surd(a, b, x.d)
        a = Fraction(x.p, x.r) - Fraction(y.p, y.r)
        return _sign_two_surds(a, Fraction(x.q, x.r), x.d, -Fraction(y.q, y.r), y.d)
    yf = _as_fraction(y)
    return _sign_surd(Fraction(x.p, x.r) - yf, Fraction(x.q, x.r), x.d)


def mobius_apply(m: Matrix2Z, x: QuadraticIrrational) -> QuadraticIrrational:
    """Exact ``(a x + b) / (c x + d)``."""
    if m.c == 0 and m.d == 0:
        raise DegenerateMatrix(f"{m} has zero bottom row")
    s = -1 if x.imaginary else 1
    # numerator and denominator, both over x.r
    p1, q1 = m.a * x.p + m.b * x.r, m.a * x.q
    p2, q2 = m.c * x.p + m.d * x.r, m.c * x.q
    # multiply through by the conjugate of the denominator
    return _reduce(p1 * p2 - s * q1 * q2 * x.d, q1 * p2 - p1 * q2,
                   p2 * p2 - s * q2 * q2 * x.d, x.d, x.imaginary)


# text form ------------------------------------------------------------

_WRAPPED = re.compile(r"\((?P<inner>.*)\)/(?P<r>\d+)")
_OVER = re.compile(r"(?P<inner>[^/]*)/(?P<r>\d+)")
_TERM = re.compile(
    r"(?P<sign>[+-]?)(?:(?:(?P<coef>\d+)\*)?sqrt\((?P<neg>-?)(?P<rad>\d+)\)|(?P<const>\d+))"
)


def parse_quadratic(text: str) -> QuadraticIrrational:
    """Parse ``(p + q*sqrt(D))/r`` and its abbreviations, e.g. ``3-2*sqrt(7)``.

    ``sqrt(-D)`` produces an imaginary value.  Perfect-square ``D`` is rejected.
    """
    s = "".join(text.split())
    m = _WRAPPED.fullmatch(s) or _OVER.fullmatch(s)
    inner, r = (m["inner"], int(m["r"])) if m else (s, 1)
    if r == 0:
        raise DivisionByZero(f"zero denominator in {text!r}")
    p = q = 0
    rad = None
    imaginary = False
    pos = 0
    seen_const = False
    while pos < len(inner):
        t = _TERM.match(inner, pos)
        if t is None or t.end() == pos or (pos > 0 and not t["sign"]):
            raise ParseError(f"cannot parse quadratic irrational {text!r}")
        sign = -1 if t["sign"] == "-" else 1
        if t["const"] is not None:
            if seen_const:
                raise ParseError(f"two rational parts in {text!r}")
            seen_const = True
            p = sign * int(t["const"])
        else:
            if rad is not None:
                raise ParseError(f"two surd parts in {text!r}")
            rad = int(t["rad"])
            imaginary = bool(t["neg"])
            q = sign * int(t["coef"] or 1)
        pos = t.end()
    if rad is None:
        raise RationalValue(f"{text!r} is rational")
    if is_square(rad):
        raise ParseError(f"radicand {rad} is a perfect square")
    return canonicalize(p, q, r, rad, imaginary)


def format_quadratic(x: QuadraticIrrational) -> str:
    rad = f"sqrt(-{x.d})" if x.imaginary else f"sqrt({x.d})"
    if x.q == 1:
        surd = rad
    elif x.q == -1:
        surd = "-" + rad
    else:
        surd = f"{x.q}*{rad}"
    if x.p == 0:
        body = surd
    else:
        body = f"{x.p}{'+' if x.q > 0 else ''}{surd}"
    if x.r == 1:
        return body
    if x.p == 0:
        return f"{body}/{x.r}"
    return f"({body})/{x.r}"
