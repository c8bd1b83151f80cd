from __future__ import annotations

import itertools
import random

import pytest

from tamejet.endo import Endo, compose_all, jacobian_det
from tamejet.field import QQ, Field
from tamejet.poly import Ring
from tamejet.samples import random_poly, random_word
from tamejet.tame import (ROUTES, Elementary, Linear, TameWord, build_alpha_m, build_alpha_P,
                          build_freeassoc_monomial, build_monomial_xkyl, build_phi_m, decompose_psi_P,
                          eval_word, height, linear_span_rank, monomial_route, perm_linear, relabel,
                          word, word_inverse)

R3 = Ring(QQ, 3)
PSI = Elementary(2, R3.gen(0) * R3.gen(1))


def only_linear_and_psi(w: TameWord) -> bool:
    ring = w.ring
    psi = ring.gen(0) * ring.gen(1)
    return all(isinstance(g, Linear) or (g.index == 2 and g.poly == psi) for g, _ in w.letters)


def target(ring, poly_text, index=2):
    return Endo.elementary(ring, index, ring.parse(poly_text))


def test_empty_word_is_identity():
    assert eval_word(TameWord(R3)).is_identity()


def test_commutator_word_display():
    x, y = R3.gen(0), R3.gen(1)
    psi1, psi2 = Elementary(0, y.pow(2)), Elementary(1, x.pow(2))
    w = word(R3, psi2, psi1, (psi2, -1), (psi1, -1))
    got = eval_word(w)
    assert got.images[0] == R3.parse("x - y^2 + (y - (x - y^2)^2)^2")


def test_word_inverse():
    rng = random.Random(3)
    w = random_word(R3, rng, 6)
    assert word_inverse(word_inverse(w)) == w
    assert eval_word(w + word_inverse(w)).is_identity()
    assert eval_word(word_inverse(w) + w).is_identity()


def test_letters_are_checked():
    with pytest.raises(ValueError):
        word(R3, Elementary(0, R3.parse("x*y")))
    with pytest.raises(ValueError):
        word(R3, Linear(((1, 0, 0), (1, 0, 0), (0, 0, 1))))
    with pytest.raises(ValueError):
        TameWord(R3, ((PSI, 2),))


def test_relabel_renames_generators():
    w = word(R3, PSI)
    assert eval_word(relabel(w, [1, 2, 0])) == target(R3, "y*z", 0)


@pytest.mark.parametrize("field", [QQ, Field(5), Field(7)], ids=lambda f: f.name)
@pytest.mark.parametrize("m", range(1, 7))
def test_build_phi_m(field, m):
    ring = Ring(field, 3)
    for b in (1, 2, -1):
        w = build_phi_m(m, b, ring=ring)
        assert only_linear_and_psi(w)
        assert eval_word(w) == Endo.elementary(ring, 2, ring.gen(0).pow(m).scale(field(b)))


def test_build_phi_m_two_is_one_induction_step():
    w = build_phi_m(2, 1)
    assert eval_word(w) == target(R3, "x^2")
    assert sum(1 for g, _ in w.letters if isinstance(g, Elementary)) == 2


@pytest.mark.parametrize("field", [QQ, Field(5), Field(7)], ids=lambda f: f.name)
def test_build_monomial_all_small(field):
    ring = Ring(field, 3)
    for k, l in itertools.product(range(4), repeat=2):
        if 0 < k + l <= 4:
            w = build_monomial_xkyl(k, l, 3, ring=ring)
            assert only_linear_and_psi(w)
            assert eval_word(w) == Endo.elementary(ring, 2, ring.monomial((k, l, 0), 3))


@pytest.mark.parametrize("route", ROUTES)
def test_each_route_over_q(route):
    for k, l in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        try:
            w = build_monomial_xkyl(k, l, 1, route=route)
        except ValueError:
            continue
        assert eval_word(w) == Endo.elementary(R3, 2, R3.monomial((k, l, 0)))


def test_routes_per_characteristic():
    assert monomial_route(2, 2, QQ) == "sheared-power"
    assert monomial_route(1, 4, Field(5)) == "sheared-alpha"
    assert monomial_route(3, 3, Field(5)) == "substitution"
    assert monomial_route(2, 2, Field(3)) == "none"
    with pytest.raises(ValueError):
        build_monomial_xkyl(2, 2, 1, Field(3))
    with pytest.raises(ValueError):
        build_monomial_xkyl(1, 1, 1, Field(2))


@pytest.mark.parametrize("m", range(1, 5))
def test_build_alpha_m(m):
    w = build_alpha_m(m, 2)
    assert only_linear_and_psi(w)
    assert eval_word(w) == Endo.elementary(R3, 2, R3.monomial((m, 1, 0), 2))


def test_build_alpha_P():
    rng = random.Random(8)
    for _ in range(4):
        P = random_poly(R3, rng, 1, 4, 3, avoid=2)
        w = build_alpha_P(P)
        assert only_linear_and_psi(w)
        assert eval_word(w) == Endo.elementary(R3, 2, P)
    assert len(build_alpha_P(R3.zero())) == 0
    with pytest.raises(ValueError):
        build_alpha_P(R3.parse("x*z"))


def test_height():
    assert height((0, 0, 1, 1, 0)) == 3
    assert height((1,)) == 1
    with pytest.raises(ValueError):
        height((0, 2))


@pytest.mark.parametrize("M", [(0,), (1,), (0, 1), (1, 0), (0, 1, 1, 0), (1, 0, 0, 1, 1)])
def test_build_freeassoc_monomial(M):
    ring = Ring(QQ, 4, True)
    w = build_freeassoc_monomial(M, 2, ring=ring)
    assert only_linear_and_psi(w)
    assert eval_word(w) == Endo.elementary(ring, 2, ring.monomial(M, 2))
    wt = build_freeassoc_monomial(M, 1, target=3, ring=ring)
    assert eval_word(wt) == Endo.elementary(ring, 3, ring.monomial(M))


def test_build_freeassoc_rejects_other_generators():
    with pytest.raises(ValueError):
        build_freeassoc_monomial((0, 2))


def test_decompose_psi_P_any_order():
    P = R3.parse("x^3 - x*y + 4*y^2")
    gens = decompose_psi_P(P, 2)
    assert len(gens) == 3
    for perm in itertools.permutations(gens):
        assert compose_all([g.endo(R3) for g in perm]) == Endo.elementary(R3, 2, P)


def test_linear_span_full_in_char_zero():
    for exps in [(2, 0, 0), (1, 1, 1), (3, 1, 0)]:
        _, dim = linear_span_rank(exps, 1)
        rank, dim = linear_span_rank(exps, 3 * dim)
        assert rank == dim


def test_linear_span_shrinks_from_frobenius():
    rank, dim = linear_span_rank((4, 0, 0), 60, Field(3))
    assert rank < dim


def test_jacobian_of_builders_is_one():
    for w in (build_phi_m(3), build_monomial_xkyl(2, 1), build_alpha_m(2)):
        assert jacobian_det(eval_word(w)) == R3.one()


def test_perm_linear_evaluates():
    w = word(R3, perm_linear(R3, [1, 0, 2]))
    assert eval_word(w).images == (R3.gen(1), R3.gen(0), R3.gen(2))
