"""Modular group: fixed points, congruence subgroups, SL2(Z/N) and the stabilizer probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from sympy import primefactors

from .contfrac import stabilizer_matrix
from .errors import BoundExceeded, FixedPointAtInfinity, NotHyperbolic, NotUnimodular
from .lattices import QuadraticOrder, integer_witnesses, pseudo_lattice_of
from .matrix import Matrix2Z
from .quadnum import QuadraticIrrational, mobius_apply, quadratic_root

__all__ = [
    "Matrix2Z",
    "CongruenceKind",
    "CongruenceSpec",
    "is_hyperbolic",
    "fixed_points",
    "in_congruence_group",
    "check_eq4",
    "sl2_modN",
    "sl2_order_formula",
    "verify_lemma4",
    "minimal_power_in_gamma1",
    "lemma1_harness",
    "Lemma1Report",
    "K_MAX_DEFAULT",
]

K_MAX_DEFAULT = 64
SL2_MOD_N_MAX = 30


def _require_unimodular(m: Matrix2Z) -> None:
    if m.det != 1:
        raise NotUnimodular(f"{m} has determinant {m.det}")


def is_hyperbolic(m: Matrix2Z) -> bool:
    _require_unimodular(m)
    return abs(m.trace) > 2


def fixed_points(m: Matrix2Z) -> tuple[QuadraticIrrational, QuadraticIrrational]:
    """Both real fixed points, the root carrying ``+sqrt`` first.

    ``x = (a-d)/(2c) ± sqrt((a+d)^2 - 4)/(2|c|)``.
    """
    if not is_hyperbolic(m):
        raise NotHyperbolic(f"{m} has |trace| <= 2")
    if m.c == 0:
        raise FixedPointAtInfinity(f"{m} fixes infinity")
    # c x^2 + (d - a) x - b = 0
    x = quadratic_root(m.c, m.d - m.a, -m.b, plus=True)
    return x, x.conjugate()


class CongruenceKind(str, Enum):
    PRINCIPAL = "principal"
    GAMMA1 = "gamma1"
    GAMMA0 = "gamma0"


@dataclass(frozen=True)
class CongruenceSpec:
    kind: CongruenceKind
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"level must be positive, got {self.N}")
        object.__setattr__(self, "kind", CongruenceKind(self.kind))


def _member(m: Matrix2Z, kind: CongruenceKind, n: int) -> bool:
    a, b, c, d = m.a % n, m.b % n, m.c % n, m.d % n
    one = 1 % n
    if kind is CongruenceKind.GAMMA0:
        return c == 0
    if kind is CongruenceKind.GAMMA1:
        return c == 0 and a == one and d == one
    return c == 0 and b == 0 and a == one and d == one


def in_congruence_group(m: Matrix2Z, spec: CongruenceSpec) -> bool:
    _require_unimodular(m)
    return _member(m, spec.kind, spec.N)


def check_eq4(m: Matrix2Z, modulus: int) -> bool:
    """``a = 1, d = 1, c = 0`` modulo ``modulus``; the congruences that close the fixed-point argument."""
    return _member(m, CongruenceKind.GAMMA1, modulus)


# SL2(Z/N) --------------------------------------------------------------

def sl2_order_formula(n: int) -> int:
    order = n ** 3
    for p in primefactors(n):
        order = order * (p * p - 1) // (p * p)
    return order


@dataclass(frozen=True)
class SL2ModN:
    N: int
    elements: frozenset = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m) -> bool:
        if isinstance(m, Matrix2Z):
            m = tuple(m.mod(self.N))
        return tuple(m) in self.elements

    def __len__(self) -> int:
        return len(self.elements)


def _check_level(n: int) -> None:
    if not 2 <= n <= SL2_MOD_N_MAX:
        raise BoundExceeded(f"level {n} outside 2..{SL2_MOD_N_MAX}")


def sl2_modN(n: int) -> SL2ModN:
    """All ``(a, b, c, d)`` over ``Z/N`` with ``ad - bc = 1``, by exhaustive enumeration."""
    _check_level(n)
    r = np.arange(n, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    mask = (a * d - b * c) % n == 1 % n
    rows = np.stack([a[mask], b[mask], c[mask], d[mask]], axis=1)
    return SL2ModN(n, frozenset(map(tuple, rows.tolist())))


def verify_lemma4(n: int) -> dict:
    """Index of Gamma(N) in Gamma1(N), measured on their images in SL2(Z/N)."""
    group = sl2_modN(n)
    gamma1 = {g for g in group.elements if g[2] == 0 and g[0] == 1 % n and g[3] == 1 % n}
    gamma = {g for g in gamma1 if g[1] == 0}
    # conjugating the image of Gamma(N) by every element of the image of Gamma1(N)
    normal = all(_conj_mod(h, g, n) in gamma for g in gamma1 for h in gamma)
    index, rem = divmod(len(gamma1), len(gamma))
    return {
        "N": n,
        "sl2_order": group.order,
        "sl2_order_formula": sl2_order_formula(n),
        "gamma1_image_order": len(gamma1),
        "gamma_image_order": len(gamma),
        "gamma1_image_unipotent": all(g[0] == 1 % n and g[2] == 0 and g[3] == 1 % n for g in gamma1),
        "index": index if rem == 0 else None,
        "normal": normal,
        "cover_degree": index if rem == 0 else None,
    }


def _conj_mod(h, g, n):
    gm, hm = Matrix2Z(*g), Matrix2Z(*h)
    inv = gm.adjugate()  # det = 1 mod n
    return tuple((gm @ hm @ inv).mod(n))


# stabilizer probes ----------------------------------------------------------

def minimal_power_in_gamma1(m: Matrix2Z, n: int, k_max: int = K_MAX_DEFAULT,
                            allow_sign: bool = False) -> Optional[int]:
    """Least ``1 <= k <= k_max`` with ``m**k`` in Gamma1(N), or None.

    With ``allow_sign`` the test also accepts ``-m**k``.
    """
    _require_unimodular(m)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    base = m.mod(n)
    power = base
    for k in range(1, k_max + 1):
        if check_eq4(power, n) or (allow_sign and check_eq4(-power, n)):
            return k
        power = power.mulmod(base, n)
    return None


@dataclass
class Lemma1Report:
    D: int
    f: int
    level: int
    theta: QuadraticIrrational
    stabilizer: Matrix2Z
    fixed_points: tuple[QuadraticIrrational, QuadraticIrrational]
    membership: tuple[bool, bool]
    witnesses: tuple[Optional[tuple[int, int]], Optional[tuple[int, int]]]
    minimal_power: Optional[int]
    minimal_power_up_to_sign: Optional[int]
    eq4_flags: list[bool]
    k_max: int
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "kind": "lemma1",
            "D": self.D,
            "f": self.f,
            "order": QuadraticOrder(self.D, self.f).to_dict(),
            "level": self.level,
            "theta": str(self.theta),
            "stabilizer": self.stabilizer.to_list(),
            "fixed_points": [str(x) for x in self.fixed_points],
            "membership": list(self.membership),
            "witnesses": [list(w) if w else None for w in self.witnesses],
            "minimal_power": self.minimal_power,
            "minimal_power_up_to_sign": self.minimal_power_up_to_sign,
            "eq4_flags": self.eq4_flags,
            "k_max": self.k_max,
            "checks": self.checks,
        }


def lemma1_harness(D: int, f: int, k_max: int = K_MAX_DEFAULT) -> Lemma1Report:
    """Stabilizer of ``f*omega(D)``, its fixed points in ``Z + f*omega*Z``, and its congruence data mod ``fD``."""
    lattice = pseudo_lattice_of(D, f)
    theta = lattice.generator
    level = f * D
    m = stabilizer_matrix(theta)
    x, xbar = fixed_points(m)
    wit = (integer_witnesses(lattice, x), integer_witnesses(lattice, xbar))
    k = minimal_power_in_gamma1(m, level, k_max)
    k_pm = minimal_power_in_gamma1(m, level, k_max, allow_sign=True)

    flags = []
    power = Matrix2Z.identity()
    for _ in range(k if k is not None else k_max):
        power = power @ m
        flags.append(check_eq4(power, level))

    mk = m ** k if k is not None else None
    checks = {
        "stabilizer_unimodular": m.det == 1,
        "stabilizer_hyperbolic": abs(m.trace) > 2,
        "fixed_points_are_theta": {x, xbar} == {theta, theta.conjugate()},
        "fixed_points_fixed": mobius_apply(m, x) == x and mobius_apply(m, xbar) == xbar,
        "fixed_points_in_lattice": all(w is not None for w in wit),
        "witnesses_reconstruct": all(
            w is not None and theta * w[1] + w[0] == pt for w, pt in zip(wit, (x, xbar))
        ),
        "power_coherent": k is None or (flags[-1] and not any(flags[:-1])),
        "power_fixes_same_points": mk is None or (
            mobius_apply(mk, x) == x and mobius_apply(mk, xbar) == xbar
        ),
    }
    return Lemma1Report(
        D=D, f=f, level=level, theta=theta, stabilizer=m, fixed_points=(x, xbar),
        membership=(wit[0] is not None, wit[1] is not None), witnesses=wit,
        minimal_power=k, minimal_power_up_to_sign=k_pm, eq4_flags=flags,
        k_max=k_max, checks=checks,
    )
