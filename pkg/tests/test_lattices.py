from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmkit.errors import NonCanonicalRadicand
from rmkit.lattices import (
    IMAGINARY,
    REAL,
    PseudoLattice,
    QuadraticOrder,
    endomorphism_order,
    field_discriminant,
    integer_witnesses,
    is_real_multiplication,
    order_omega,
    pseudo_lattice_of,
)
from rmkit.quadnum import canonicalize, is_squarefree, mobius_apply, parse_quadratic

from .strategies import SQUAREFREE, quadratics, unimodular


def test_omega_cases():
    assert str(order_omega(5)) == "(1+sqrt(5))/2"
    assert str(order_omega(7)) == "sqrt(7)"
    assert order_omega(6, IMAGINARY).imaginary


@pytest.mark.parametrize("D", [0, 1, 4, 12, -3])
def test_omega_rejects(D):
    with pytest.raises(NonCanonicalRadicand):
        order_omega(D)


@pytest.mark.parametrize("D, f, disc", [(5, 1, 5), (2, 1, 8), (3, 2, 48), (13, 3, 117)])
def test_discriminant(D, f, disc):
    assert QuadraticOrder(D, f).discriminant == disc
    assert QuadraticOrder(D, f, IMAGINARY).discriminant == -disc


@pytest.mark.parametrize("text, D, f", [("(1+sqrt(5))/2", 5, 1), ("sqrt(5)", 5, 2), ("sqrt(2)", 2, 1), ("sqrt(12)", 3, 2)])
def test_endomorphism_order_examples(text, D, f):
    assert endomorphism_order(parse_quadratic(text)) == QuadraticOrder(D, f)


@given(st.sampled_from(SQUAREFREE), st.integers(1, 8))
def test_generator_order_round_trip(D, f):
    order = QuadraticOrder(D, f)
    assert endomorphism_order(order.generator) == order
    assert QuadraticOrder.from_dict(order.to_dict()) == order


@given(quadratics(), unimodular())
def test_order_invariant_under_unimodular_action(x, m):
    assert endomorphism_order(mobius_apply(m, x)) == endomorphism_order(x)


@given(quadratics())
def test_order_discriminant_matches_minpoly(x):
    assert endomorphism_order(x).discriminant == x.minpoly().discriminant


def test_field_discriminant():
    assert [field_discriminant(D) for D in (2, 3, 5, 13)] == [8, 12, 5, 13]


def test_pseudo_lattice_membership():
    lat = pseudo_lattice_of(5, 1)
    phi = order_omega(5)
    assert phi in lat
    assert phi.conjugate() in lat
    assert integer_witnesses(lat, phi.conjugate()) == (1, -1)
    assert parse_quadratic("sqrt(5)") in lat
    assert parse_quadratic("(1+sqrt(5))/4") not in lat
    assert parse_quadratic("sqrt(2)") not in lat
    assert lat.coordinates(parse_quadratic("sqrt(5)/2")) == (Fraction(-1, 2), Fraction(1))
    assert lat.coordinates(parse_quadratic("(1+sqrt(5))/4")) == (0, Fraction(1, 2))


def test_pseudo_lattice_equality_is_set_equality():
    a = PseudoLattice(parse_quadratic("sqrt(2)"))
    b = PseudoLattice(parse_quadratic("3-sqrt(2)"))
    c = PseudoLattice(parse_quadratic("2*sqrt(2)"))
    assert a == b and hash(a) == hash(b)
    assert a != c


@given(st.sampled_from(SQUAREFREE), st.integers(1, 5), st.integers(-20, 20), st.integers(-20, 20).filter(bool))
def test_witnesses_reconstruct(D, f, z1, z2):
    lat = pseudo_lattice_of(D, f)
    x = lat.generator * z2 + z1
    assert integer_witnesses(lat, x) == (z1, z2)


def test_real_multiplication():
    rm = is_real_multiplication("sqrt(3)")
    assert rm.has_rm and rm.order == QuadraticOrder(3, 1)
    assert not is_real_multiplication(Fraction(1, 2)).has_rm
    assert not is_real_multiplication("7/3").has_rm
    assert not is_real_multiplication("sqrt(-3)").has_rm
    assert is_real_multiplication(canonicalize(1, 1, 2, 13)).order == QuadraticOrder(13, 1)


def test_order_validation():
    with pytest.raises(ValueError):
        QuadraticOrder(5, 0)
    with pytest.raises(ValueError):
        QuadraticOrder(5, 1, "complex")
    assert all(is_squarefree(D) for D in SQUAREFREE)
    assert REAL == QuadraticOrder(2).sign


@pytest.mark.parametrize("D", SQUAREFREE)
def test_omega_defining_equation(D):
    w = order_omega(D)
    if D % 4 == 1:
        assert tuple(w.minpoly()) == (1, -1, -(D - 1) // 4)
    else:
        assert tuple(w.minpoly()) == (1, 0, -D)


@pytest.mark.parametrize("D, f", [(2, 1), (5, 1), (3, 2), (13, 3)])
def test_contains_grid(D, f):
    lat = pseudo_lattice_of(D, f)
    theta = lat.generator
    for z1 in range(-10, 11):
        for z2 in range(-10, 11):
            if z2:
                assert theta * z2 + z1 in lat
    assert theta / 2 not in lat
