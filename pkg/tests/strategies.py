"""Hypothesis strategies for fields, polynomials and endomorphisms."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from tamejet.field import QQ, Field
from tamejet.poly import Polynomial, Ring

FIELDS = [QQ, Field(2), Field(3), Field(5), Field(7)]

small_coeff = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))


def monomials(ring: Ring, max_deg: int = 3):
    letters = st.lists(st.integers(0, ring.n - 1), max_size=max_deg)
    if ring.free:
        return letters.map(tuple)
    return letters.map(lambda w: tuple(w.count(i) for i in range(ring.n)))


def polys(ring: Ring, max_deg: int = 3, max_terms: int = 5):
    coeff = small_coeff if ring.field.char == 0 else st.integers(0, ring.field.char - 1)

    def build(pairs):
        acc = {}
        for m, c in pairs:
            acc[m] = acc.get(m, 0) + ring.field(Fraction(c))
        return Polynomial(ring, acc)

    return st.lists(st.tuples(monomials(ring, max_deg), coeff), max_size=max_terms).map(build)


def rings(free=None, n_max: int = 3):
    return st.builds(Ring, st.sampled_from(FIELDS), st.integers(1, n_max),
                     st.booleans() if free is None else st.just(free))
