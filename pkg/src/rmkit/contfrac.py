"""Periodic continued fractions of real quadratic irrationals.

Expansion runs the integer surd recurrence on states ``(P, Q)`` standing for
``(P + sqrt(N))/Q``; a repeated state closes the period.  Equivalence under
the unimodular Moebius action is tail coincidence of the expansions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import ParseError, RationalValue
from .matrix import Matrix2Z, digit_matrix
from .quadnum import QuadraticIrrational, mobius_apply, quadratic_root


@dataclass(frozen=True)
class ContinuedFraction:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise RationalValue("a periodic expansion needs a nonempty period")
        digits = self.preperiod + self.period
        # period digits recur past position 0, so they must be positive too
        if any(a < 1 for a in digits[1:]) or any(a < 1 for a in self.period):
            raise ValueError(f"digits after the first must be positive: {digits}")

    def digit(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def digits(self, n: int) -> list[int]:
        return [self.digit(i) for i in range(n)]

    def value(self) -> QuadraticIrrational:
        """Exact value: the attracting root of the period equation, pushed through the preperiod."""
        pk = product_matrix(self.period)
        # t = (pk.a t + pk.b) / (pk.c t + pk.d); the purely periodic tail is the root > 1
        tail = quadratic_root(pk.c, pk.d - pk.a, -pk.b, plus=True)
        return mobius_apply(product_matrix(self.preperiod), tail)

    def __str__(self) -> str:
        return format_cf(self)


def product_matrix(digits) -> Matrix2Z:
    m = Matrix2Z.identity()
    for a in digits:
        m = m @ digit_matrix(a)
    return m


def _surd_state(x: QuadraticIrrational) -> tuple[int, int, int]:
    """Write ``x`` as ``(P + sqrt(N))/Q`` with ``Q | N - P^2``."""
    n = x.q * x.q * x.d
    P, Q = (x.p, x.r) if x.q > 0 else (-x.p, -x.r)
    if (n - P * P) % Q:
        P, Q, n = P * abs(Q), Q * abs(Q), n * Q * Q
    return P, Q, n


def _surd_floor(P: int, Q: int, s: int) -> int:
    # floor((P + sqrt(N))/Q) with s = isqrt(N), N not a square
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def cf_expand(x: QuadraticIrrational) -> ContinuedFraction:
    if not isinstance(x, QuadraticIrrational):
        raise RationalValue(f"{x!r} is rational; its expansion terminates")
    if x.imaginary:
        raise ValueError("continued fractions need a real value")
    P, Q, n = _surd_state(x)
    s = math.isqrt(n)
    seen: dict[tuple[int, int], int] = {}
    digits: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(digits)
        a = _surd_floor(P, Q, s)
        digits.append(a)
        P = a * Q - P
        Q = (n - P * P) // Q
    start = seen[(P, Q)]
    return ContinuedFraction(tuple(digits[:start]), tuple(digits[start:]))


def convergents(cf: ContinuedFraction, k: int) -> list[Fraction]:
    if k < 1:
        raise ValueError("k must be at least 1")
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    out = []
    for a in cf.digits(k):
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        out.append(Fraction(h0, k0))
    return out


class Equivalence(NamedTuple):
    equivalent: bool
    witness: Matrix2Z | None

    @property
    def determinant(self) -> int | None:
        return None if self.witness is None else self.witness.det


def gl2_equivalent(x: QuadraticIrrational, y: QuadraticIrrational) -> Equivalence:
    """Decide unimodular equivalence; the witness ``M`` satisfies ``M(y) = x``."""
    if x.d != y.d:
        return Equivalence(False, None)
    cx, cy = cf_expand(x), cf_expand(y)
    if len(cx.period) != len(cy.period):
        return Equivalence(False, None)
    n = len(cy.period)
    for j in range(n):
        if cy.period[j:] + cy.period[:j] == cx.period:
            mx = product_matrix(cx.preperiod)
            my = product_matrix(cy.preperiod + cy.period[:j])
            # x = mx(t), y = my(t)
            return Equivalence(True, mx @ my.inverse())
    return Equivalence(False, None)


def stabilizer_matrix(x: QuadraticIrrational) -> Matrix2Z:
    """Primitive hyperbolic element of SL2(Z) fixing ``x`` and its conjugate."""
    cf = cf_expand(x)
    pre = product_matrix(cf.preperiod)
    m = pre @ product_matrix(cf.period) @ pre.inverse()
    if m.det == -1:
        m = m @ m
    return m


def bratteli_data(cf: ContinuedFraction, n: int) -> list[Matrix2Z]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [digit_matrix(a) for a in cf.digits(n)]


# text form ------------------------------------------------------------

def format_cf(cf: ContinuedFraction) -> str:
    period = "(" + ", ".join(map(str, cf.period)) + ")"
    if not cf.preperiod:
        return f"[{period}]"
    head, *rest = cf.preperiod
    return f"[{head}; " + ", ".join([*map(str, rest), period]) + "]"


_CF = re.compile(r"\[\s*(?:(?P<head>-?\d+)\s*;\s*(?P<rest>(?:\d+\s*,\s*)*))?\((?P<period>[\d\s,]+)\)\s*\]")


def parse_cf(text: str) -> ContinuedFraction:
    m = _CF.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"cannot parse continued fraction {text!r}")
    pre = []
    if m["head"] is not None:
        pre.append(int(m["head"]))
        pre.extend(int(t) for t in m["rest"].split(",") if t.strip())
    period = tuple(int(t) for t in m["period"].split(","))
    return ContinuedFraction(tuple(pre), period)

