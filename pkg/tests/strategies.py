"""Shared hypothesis strategies."""

from __future__ import annotations

from hypothesis import strategies as st

from rmkit.matrix import Matrix2Z
from rmkit.quadnum import canonicalize, is_squarefree

SQUAREFREE = [d for d in range(2, 61) if is_squarefree(d)]


@st.composite
def quadratics(draw, radicands=SQUAREFREE):
    d = draw(st.sampled_from(radicands))
    p = draw(st.integers(-60, 60))
    q = draw(st.integers(-12, 12).filter(bool))
    r = draw(st.integers(1, 24))
    return canonicalize(p, q, r, d)


@st.composite
def unimodular(draw, bound=6, det=1):
    """Random ``SL2(Z)`` (or ``det = -1``) matrices as short words in the generators."""
    s = Matrix2Z(0, -1, 1, 0)
    m = Matrix2Z.identity()
    for k in draw(st.lists(st.integers(-bound, bound), min_size=1, max_size=5)):
        m = m @ Matrix2Z(1, k, 0, 1) @ s
    if det == -1:
        m = m @ Matrix2Z(0, 1, 1, 0)
    return m
