"""Seeded random polynomials, endomorphisms and tame words for tests and checks."""

from __future__ import annotations

import random

from . import linalg
from .endo import Endo
from .poly import Polynomial, Ring
from .tame import Elementary, Linear, TameWord


def random_poly(ring: Ring, rng: random.Random, min_deg: int = 1, max_deg: int = 3,
                terms: int = 4, avoid: int | None = None, coeffs=(-3, -2, -1, 1, 2, 3)) -> Polynomial:
    """A sum of ``terms`` random monomials with degrees in [min_deg, max_deg].

    With ``avoid`` set, monomials never involve that generator.
    """
    letters = [i for i in range(ring.n) if i != avoid]
    if not letters:
        return ring.zero()
    acc: dict = {}
    for _ in range(terms):
        d = rng.randint(min_deg, max_deg)
        if ring.free:
            mon = tuple(rng.choice(letters) for _ in range(d))
        else:
            e = [0] * ring.n
            for _ in range(d):
                e[rng.choice(letters)] += 1
            mon = tuple(e)
        acc[mon] = acc.get(mon, 0) + ring.field(rng.choice(coeffs))
    return Polynomial(ring, acc)


def random_endo(ring: Ring, rng: random.Random, min_deg: int = 1, max_deg: int = 3,
                terms: int = 3, perturb: bool = True) -> Endo:
    """x_i -> x_i + random terms (identity-plus-noise when ``perturb``)."""
    imgs = []
    for g in ring.gens():
        p = random_poly(ring, rng, min_deg, max_deg, terms)
        imgs.append(g + p if perturb else p)
    return Endo(ring, tuple(imgs))


def random_linear(ring: Ring, rng: random.Random, entries=(-2, -1, 0, 1, 2)) -> Linear:
    f = ring.field
    while True:
        m = [[f(rng.choice(entries)) for _ in range(ring.n)] for _ in range(ring.n)]
        if linalg.det(f, m) != 0:
            return Linear(tuple(tuple(r) for r in m))


def random_elementary(ring: Ring, rng: random.Random, min_deg: int = 2, max_deg: int = 3,
                      terms: int = 2) -> Elementary:
    i = rng.randrange(ring.n)
    p = ring.zero()
    while p.is_zero():
        p = random_poly(ring, rng, min_deg, max_deg, terms, avoid=i)
    return Elementary(i, p)


def random_word(ring: Ring, rng: random.Random, length: int = 4, max_deg: int = 3,
                linear_prob: float = 0.3) -> TameWord:
    letters = []
    for _ in range(length):
        if rng.random() < linear_prob:
            gen = random_linear(ring, rng)
        else:
            gen = random_elementary(ring, rng, 2, max_deg)
        letters.append((gen, rng.choice([1, -1])))
    return TameWord(ring, tuple(letters))
