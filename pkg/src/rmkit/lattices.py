"""Pseudo-lattices ``Z + Z*theta`` and orders ``Z + f*O_K`` in quadratic fields.

Orders are reported by the pair ``(D, f)``: ``D`` the squarefree radicand
and ``f`` the conductor, with discriminant ``f**2 * d_K`` where ``d_K`` is
``D`` for ``D = 1 mod 4`` and ``4D`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import NonCanonicalRadicand, RationalValue
from .quadnum import QuadraticIrrational, canonicalize, is_squarefree, squarefree_decompose

REAL = "real"
IMAGINARY = "imaginary"


def field_discriminant(D: int) -> int:
    return D if D % 4 == 1 else 4 * D


@dataclass(frozen=True)
class QuadraticOrder:
    D: int
    f: int = 1
    sign: str = REAL

    def __post_init__(self):
        if self.D <= 1 or not is_squarefree(self.D):
            raise NonCanonicalRadicand(f"D = {self.D} is not a squarefree integer > 1")
        if self.f < 1:
            raise ValueError(f"conductor must be positive, got {self.f}")
        if self.sign not in (REAL, IMAGINARY):
            raise ValueError(f"sign must be {REAL!r} or {IMAGINARY!r}")

    @property
    def omega(self) -> QuadraticIrrational:
        return order_omega(self.D, self.sign)

    @property
    def generator(self) -> QuadraticIrrational:
        """``f * omega``, so that the order is ``Z + generator*Z``."""
        return self.omega * self.f

    @property
    def discriminant(self) -> int:
        dk = field_discriminant(self.D)
        return self.f ** 2 * (dk if self.sign == REAL else -dk)

    def to_dict(self) -> dict:
        return {"D": self.D, "f": self.f, "sign": self.sign}

    @classmethod
    def from_dict(cls, data: dict) -> QuadraticOrder:
        return cls(int(data["D"]), int(data["f"]), data.get("sign", REAL))

    def __str__(self) -> str:
        return f"({'' if self.sign == REAL else '-'}{self.D}, {self.f})"


def order_omega(D: int, sign: str = REAL) -> QuadraticIrrational:
    """``(1+sqrt(D))/2`` when ``D = 1 mod 4``, else ``sqrt(D)``.

    The imaginary sign applies the same rule formally with ``sqrt(-D)``.
    """
    if D <= 1 or not is_squarefree(D):
        raise NonCanonicalRadicand(f"D = {D} is not a squarefree integer > 1")
    imaginary = sign == IMAGINARY
    if D % 4 == 1:
        return canonicalize(1, 1, 2, D, imaginary)
    return canonicalize(0, 1, 1, D, imaginary)


def endomorphism_order(x: QuadraticIrrational) -> QuadraticOrder:
    """The order ``End(Z + Z*x)``, read off the discriminant of the minimal polynomial."""
    if x.imaginary:
        raise ValueError("endomorphism_order expects a real quadratic irrational")
    disc = x.minpoly().discriminant
    _, D = squarefree_decompose(disc)
    f2, rem = divmod(disc, field_discriminant(D))
    f = math.isqrt(f2)
    assert rem == 0 and f * f == f2, f"discriminant {disc} is not f^2 d_K"
    return QuadraticOrder(D, f, REAL)


@dataclass(frozen=True, eq=False)
class PseudoLattice:
    """The subgroup ``Z + Z*generator`` of the real line; equality is set equality."""

    generator: QuadraticIrrational

    def coordinates(self, x: QuadraticIrrational) -> tuple[Fraction, Fraction] | None:
        """Rational ``(z1, z2)`` with ``x = z1 + z2*generator``, or None across fields."""
        g = self.generator
        if x.d != g.d or x.imaginary != g.imaginary:
            return None
        z2 = x.surd_coefficient / g.surd_coefficient
        z1 = x.rational_part - z2 * g.rational_part
        return z1, z2

    def __contains__(self, x: QuadraticIrrational) -> bool:
        return contains(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PseudoLattice):
            return NotImplemented
        return other.generator in self and self.generator in other

    def __hash__(self) -> int:
        return hash((self.generator.d, self.generator.imaginary, abs(self.generator.surd_coefficient)))

    def __str__(self) -> str:
        return f"Z + ({self.generator})Z"


def pseudo_lattice_of(D: int, f: int) -> PseudoLattice:
    return PseudoLattice(QuadraticOrder(D, f).generator)


def contains(lattice: PseudoLattice, x: QuadraticIrrational) -> bool:
    coords = lattice.coordinates(x)
    return coords is not None and all(z.denominator == 1 for z in coords)


def integer_witnesses(lattice: PseudoLattice, x: QuadraticIrrational) -> tuple[int, int] | None:
    """Integers ``(z1, z2)`` with ``x = z1 + z2*theta`` when ``x`` lies in the lattice."""
    coords = lattice.coordinates(x)
    if coords is None or any(z.denominator != 1 for z in coords):
        return None
    return int(coords[0]), int(coords[1])


class RealMultiplication(NamedTuple):
    has_rm: bool
    order: QuadraticOrder | None


def is_real_multiplication(x) -> RealMultiplication:
    """Whether ``End(Z + Z*x)`` exceeds ``Z``; rational inputs take the negative branch."""
    if isinstance(x, str):
        from .quadnum import parse_quadratic

        try:
            x = parse_quadratic(x)
        except RationalValue:
            return RealMultiplication(False, None)
    if isinstance(x, (int, Fraction)):
        return RealMultiplication(False, None)
    if x.imaginary:
        return RealMultiplication(False, None)
    return RealMultiplication(True, endomorphism_order(x))
