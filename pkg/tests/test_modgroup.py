from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmkit.errors import BoundExceeded, NotHyperbolic, NotUnimodular
from rmkit.matrix import Matrix2Z
from rmkit.modgroup import (
    CongruenceKind,
    CongruenceSpec,
    check_eq4,
    fixed_points,
    in_congruence_group,
    is_hyperbolic,
    lemma1_harness,
    minimal_power_in_gamma1,
    sl2_modN,
    sl2_order_formula,
    verify_lemma4,
)
from rmkit.quadnum import mobius_apply, parse_quadratic

from .strategies import unimodular


def test_fixed_points_golden():
    x, xbar = fixed_points(Matrix2Z(2, 1, 1, 1))
    assert x == parse_quadratic("(1+sqrt(5))/2")
    assert xbar == parse_quadratic("(1-sqrt(5))/2")


def test_fixed_points_negative_c():
    m = Matrix2Z(1, -1, -1, 2)
    x, xbar = fixed_points(m)
    assert mobius_apply(m, x) == x and mobius_apply(m, xbar) == xbar
    assert x == parse_quadratic("(1+sqrt(5))/2")


def test_fixed_point_errors():
    # c = 0 in SL2(Z) forces trace +-2, so such matrices are never hyperbolic
    with pytest.raises(NotHyperbolic):
        fixed_points(Matrix2Z(1, 5, 0, 1))
    with pytest.raises(NotHyperbolic):
        fixed_points(Matrix2Z(0, -1, 1, 0))
    with pytest.raises(NotUnimodular):
        is_hyperbolic(Matrix2Z(2, 0, 0, 2))


@given(unimodular(bound=8))
def test_fixed_points_are_fixed(m):
    if abs(m.trace) <= 2:
        return
    x, xbar = fixed_points(m)
    assert mobius_apply(m, x) == x and mobius_apply(m, xbar) == xbar
    assert x.conjugate() == xbar


def _random_sl2(rng, bound=40):
    while True:
        a, b, c = rng.randint(-bound, bound), rng.randint(-bound, bound), rng.randint(-bound, bound)
        if a and (1 + b * c) % a == 0:
            return Matrix2Z(a, b, c, (1 + b * c) // a)


def test_congruence_monotone_thousand():
    rng = random.Random(3)
    for _ in range(1000):
        m = _random_sl2(rng)
        n = rng.randint(1, 12)
        g = in_congruence_group(m, CongruenceSpec(CongruenceKind.PRINCIPAL, n))
        g1 = in_congruence_group(m, CongruenceSpec(CongruenceKind.GAMMA1, n))
        g0 = in_congruence_group(m, CongruenceSpec("gamma0", n))
        assert (not g or g1) and (not g1 or g0)


def test_congruence_examples():
    m = Matrix2Z(1, 5, 6, 31)
    assert in_congruence_group(m, CongruenceSpec("gamma1", 6))
    assert not in_congruence_group(m, CongruenceSpec("principal", 6))
    assert in_congruence_group(Matrix2Z(1, 6, 6, 37), CongruenceSpec("principal", 6))
    assert in_congruence_group(Matrix2Z(5, 2, 12, 5), CongruenceSpec("gamma0", 6))
    assert not in_congruence_group(Matrix2Z(5, 2, 12, 5), CongruenceSpec("gamma1", 6))
    assert check_eq4(Matrix2Z(1, 5, 6, 31), 6)
    with pytest.raises(ValueError):
        CongruenceSpec("gamma1", 0)


@pytest.mark.parametrize("n", range(2, 21))
def test_sl2_order_formula(n):
    assert sl2_modN(n).order == sl2_order_formula(n)


def test_sl2_small_orders():
    assert [sl2_modN(n).order for n in (2, 3, 4, 5, 6)] == [6, 24, 48, 120, 144]
    group = sl2_modN(5)
    assert Matrix2Z(2, 1, 1, 1) in group
    assert (2, 0, 0, 3) in group
    assert (2, 0, 0, 2) not in group


def test_sl2_level_guard():
    with pytest.raises(BoundExceeded):
        sl2_modN(31)
    with pytest.raises(BoundExceeded):
        sl2_modN(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_lemma4_index(n):
    rep = verify_lemma4(n)
    assert rep["index"] == n
    assert rep["normal"] and rep["gamma1_image_unipotent"]
    assert rep["gamma_image_order"] == 1


@given(unimodular(), st.integers(2, 30))
def test_minimal_power_coherent(m, n):
    k = minimal_power_in_gamma1(m, n, 64)
    ks = minimal_power_in_gamma1(m, n, 64, allow_sign=True)
    if k is None:
        return
    assert check_eq4(m ** k, n)
    assert all(not check_eq4(m ** j, n) for j in range(1, k))
    assert ks is not None and ks <= k


def test_minimal_power_validation():
    with pytest.raises(ValueError):
        minimal_power_in_gamma1(Matrix2Z(2, 1, 1, 1), 5, 0)
    with pytest.raises(NotUnimodular):
        minimal_power_in_gamma1(Matrix2Z(2, 1, 1, 2), 5)
    assert minimal_power_in_gamma1(Matrix2Z(2, 1, 1, 1), 5, k_max=3) is None


@pytest.mark.parametrize(
    "D, f, k, k_sign",
    [(2, 1, 1, 1), (5, 1, 10, 5), (3, 1, 6, 3), (2, 2, 4, 4)],
)
def test_lemma1_minimal_powers(D, f, k, k_sign):
    rep = lemma1_harness(D, f)
    assert rep.passed, rep.checks
    assert rep.minimal_power == k
    assert rep.minimal_power_up_to_sign == k_sign
    assert rep.eq4_flags[-1] and not any(rep.eq4_flags[:-1])


def test_lemma1_report_dict():
    d = lemma1_harness(5, 1).to_dict()
    assert d["stabilizer"] == [2, 1, 1, 1]
    assert d["level"] == 5 and d["witnesses"] == [[0, 1], [1, -1]]
