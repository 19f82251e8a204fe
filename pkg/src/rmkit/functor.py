"""The Teichmueller functor on endomorphism matrices, CM norm forms and the (-D, f) -> (D, f) pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import NotIntegral, RationalValue
from .lattices import REAL, QuadraticOrder, endomorphism_order
from .matrix import Matrix2Z
from .quadnum import QuadraticIrrational, canonicalize, is_squarefree, quadratic_root


def case_of(D: int) -> str:
    """``"I"`` for ``D = 1 mod 4``, ``"II"`` for ``D = 2, 3 mod 4``."""
    return "I" if D % 4 == 1 else "II"


class CmTraceNorm(NamedTuple):
    trace: Fraction
    norm: Fraction
    integral: bool


def cm_trace_norm(D: int, f: int, m: int, n: int, case: Optional[str] = None) -> CmTraceNorm:
    """Trace and norm of ``alpha = m + n*f*omega`` in the imaginary order of conductor ``f``.

    Case I: ``alpha = (2m + fn)/2 + sqrt(-f^2 D n^2 / 4)``; Case II:
    ``alpha = m + sqrt(-f^2 D n^2)``.
    """
    case = case or case_of(D)
    if case == "I":
        trace = Fraction(2 * m + f * n)
        norm = Fraction(2 * m + f * n, 2) ** 2 + Fraction(f * f * D * n * n, 4)
    elif case == "II":
        trace = Fraction(2 * m)
        norm = Fraction(m * m + f * f * D * n * n)
    else:
        raise ValueError(f"unknown case {case!r}")
    return CmTraceNorm(trace, norm, trace.denominator == 1 and norm.denominator == 1)


def search_bound_default(f: int) -> int:
    return max(10, 2 * f + 2)


class NormMinimum(NamedTuple):
    minimum: Optional[int]
    witnesses: tuple[tuple[int, int], ...]


def minimal_norm_search(D: int, f: int, bound: Optional[int] = None) -> NormMinimum:
    """Smallest integral norm over ``|m|, |n| <= bound`` with ``n != 0``, and every ``(m, n)`` attaining it."""
    bound = search_bound_default(f) if bound is None else bound
    if bound < 2 * f + 2:
        raise ValueError(f"bound {bound} below 2f + 2 = {2 * f + 2}")
    case = case_of(D)
    best = None
    hits: list[tuple[int, int]] = []
    for n in range(-bound, bound + 1):
        if n == 0:
            continue
        for m in range(-bound, bound + 1):
            tn = cm_trace_norm(D, f, m, n, case)
            if not tn.integral:
                continue
            v = int(tn.norm)
            if best is None or v < best:
                best, hits = v, [(m, n)]
            elif v == best:
                hits.append((m, n))
    return NormMinimum(best, tuple(sorted(hits)))


def endo_matrix(trace, norm) -> Matrix2Z:
    """Multiplication-by-alpha matrix ``(Tr, -1; N, 0)``."""
    t, nm = Fraction(trace), Fraction(norm)
    if t.denominator != 1 or nm.denominator != 1:
        raise NotIntegral(f"trace {t} / norm {nm} not integral")
    return Matrix2Z(int(t), -1, int(nm), 0)


def teichmuller_map(m: Matrix2Z) -> Matrix2Z:
    """``(a, b; c, d) -> (a, b; -c, -d)``."""
    return Matrix2Z(m.a, m.b, -m.c, -m.d)


def recover_generator(m: Matrix2Z) -> QuadraticIrrational:
    """Generator ``theta`` with ``c*theta^2 + (d-a)*theta - b = 0`` (``+sqrt`` root).

    Raises :class:`RationalValue` when the relation has rational roots.
    """
    if m.c == 0:
        raise RationalValue(f"{m} gives a linear relation")
    return quadratic_root(m.c, m.d - m.a, -m.b, plus=True)


def claimed_generator(D: int, f: int) -> QuadraticIrrational:
    """``(f + sqrt(f^2 D))/2`` in Case I, ``sqrt(f^2 D)`` in Case II."""
    if case_of(D) == "I":
        return canonicalize(f, 1, 2, f * f * D)
    return canonicalize(0, 1, 1, f * f * D)


@dataclass
class FunctorReport:
    D: int
    f: int
    case: str
    bound: int
    minimum_norm: Optional[int]
    minimizers: tuple[tuple[int, int], ...]
    alpha0: Optional[tuple[int, int]]
    endo: Optional[Matrix2Z]
    mapped: Optional[Matrix2Z]
    claimed: QuadraticOrder
    claimed_generator: QuadraticIrrational
    recovered_generator: Optional[QuadraticIrrational]
    recovered: Optional[QuadraticOrder]
    multiplier: Optional[QuadraticIrrational]
    checks: dict[str, bool]
    flags: dict[str, bool]

    @property
    def agreement(self) -> bool:
        return self.recovered is not None and self.recovered == self.claimed

    @property
    def input_order(self) -> dict:
        return {"D": self.D, "f": self.f, "sign": "imaginary"}

    def to_dict(self) -> dict:
        mult_norm = None if self.multiplier is None else str(self.multiplier.trace_norm()[1])
        return {
            "kind": "lemma3",
            "D": self.D,
            "f": self.f,
            "input": self.input_order,
            "case": self.case,
            "bound": self.bound,
            "minimum_norm": self.minimum_norm,
            "expected_minimum_norm": self.f * self.f * self.D,
            "minimizers": [list(w) for w in self.minimizers],
            "alpha0": None if self.alpha0 is None else list(self.alpha0),
            "endo_matrix": None if self.endo is None else self.endo.to_list(),
            "mapped_matrix": None if self.mapped is None else self.mapped.to_list(),
            "claimed": self.claimed.to_dict(),
            "claimed_generator": str(self.claimed_generator),
            "recovered_generator": None if self.recovered_generator is None else str(self.recovered_generator),
            "recovered": None if self.recovered is None else self.recovered.to_dict(),
            "multiplier": None if self.multiplier is None else str(self.multiplier),
            "multiplier_norm": mult_norm,
            "agreement": self.agreement,
            "checks": self.checks,
            "flags": self.flags,
        }


def functor_on_class(D: int, f: int, bound: Optional[int] = None) -> FunctorReport:
    """Carry the CM order of ``Q(sqrt(-D))`` with conductor ``f`` through the functor."""
    if D <= 1 or not is_squarefree(D) or f < 1:
        raise ValueError(f"need squarefree D > 1 and f >= 1, got ({D}, {f})")
    bound = search_bound_default(f) if bound is None else bound
    case = case_of(D)
    found = minimal_norm_search(D, f, bound)

    alpha0 = endo = mapped = gen = rec = mult = None
    if found.minimum is not None:
        # the minimizer with n > 0 (and smallest m) is taken as alpha0
        alpha0 = min(w for w in found.witnesses if w[1] > 0)
        tn = cm_trace_norm(D, f, *alpha0, case)
        endo = endo_matrix(tn.trace, tn.norm)
        mapped = teichmuller_map(endo)
        try:
            gen = recover_generator(mapped)
        except RationalValue:
            gen = None
        if gen is not None:
            rec = endomorphism_order(gen)
            mult = gen * mapped.c + mapped.d

    claimed = QuadraticOrder(D, f, REAL)
    cgen = claimed_generator(D, f)
    checks = {
        "claimed_is_real_D_f": claimed.to_dict() == {"D": D, "f": f, "sign": REAL},
        "claimed_generator_order": endomorphism_order(cgen) == claimed,
        "map_is_involution": endo is None or teichmuller_map(mapped) == endo,
        "trace_preserved": endo is None or mapped.trace == endo.trace,
        "det_negated": endo is None or mapped.det == -endo.det,
    }
    if case == "II":
        checks["recovery_agrees"] = rec is not None and rec == claimed
    flags = {
        "minimum_matches_f2D": found.minimum == f * f * D,
        "recovery_agrees": rec is not None and rec == claimed,
        "search_failed": found.minimum is None,
    }
    return FunctorReport(
        D=D, f=f, case=case, bound=bound, minimum_norm=found.minimum,
        minimizers=found.witnesses, alpha0=alpha0, endo=endo, mapped=mapped,
        claimed=claimed, claimed_generator=cgen, recovered_generator=gen,
        recovered=rec, multiplier=mult, checks=checks, flags=flags,
    )
