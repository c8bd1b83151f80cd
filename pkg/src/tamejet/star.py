"""Star products a*fg + b*gf on the free algebra, associators, and the mirror anti-automorphism."""

from __future__ import annotations

from dataclasses import dataclass

from .endo import Endo
from .poly import Polynomial


@dataclass(frozen=True)
class StarProduct:
    a: object = 1
    b: object = 0


def _require_free(*polys: Polynomial):
    for p in polys:
        if not p.free:
            raise ValueError("star products live in the free algebra")


def star(f: Polynomial, g: Polynomial, s: StarProduct) -> Polynomial:
    _require_free(f, g)
    return (f * g).scale(s.a) + (g * f).scale(s.b)


def bracket(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g - g * f


def associator(f: Polynomial, g: Polynomial, h: Polynomial, s: StarProduct) -> Polynomial:
    """(f*g)*h - f*(g*h)."""
    _require_free(f, g, h)
    return star(star(f, g, s), h, s) - star(f, star(g, h, s), s)


def associator_closed_form(f: Polynomial, g: Polynomial, h: Polynomial, s: StarProduct) -> Polynomial:
    """a*b*[g, [f, h]]."""
    return bracket(g, bracket(f, h)).scale(f.ring.field(s.a) * f.ring.field(s.b))


def mirror_poly(p: Polynomial) -> Polynomial:
    return p.reverse()


def mirror(phi: Endo) -> Endo:
    """Conjugation by word reversal: every image has each word reversed."""
    if not phi.ring.free:
        raise ValueError("mirror expects a free-variant endomorphism")
    return Endo(phi.ring, tuple(p.reverse() for p in phi.images))
