from __future__ import annotations

import random

import pytest

from tamejet.endo import Endo, nagata
from tamejet.expr import ParseError
from tamejet.field import QQ, Field
from tamejet.fileio import format_endo, format_word, parse_any, parse_endo, parse_word
from tamejet.poly import Ring
from tamejet.samples import random_endo, random_poly, random_word
from tamejet.tame import build_freeassoc_monomial, build_phi_m

FIELDS = [QQ, Field(5), Field(7)]


def corpus():
    """Fixture polynomials, endos and words in both variants over three fields."""
    items = []
    rng = random.Random(2024)
    for field in FIELDS:
        for free in (False, True):
            ring = Ring(field, 3, free)
            for _ in range(6):
                items.append(("poly", random_poly(ring, rng, 0, 4, 5, coeffs=(-3, -1, 1, 2, 5))))
            for _ in range(3):
                items.append(("endo", random_endo(ring, rng)))
            items.append(("word", random_word(ring, rng, 4)))
    items.append(("endo", nagata()))
    items.append(("word", build_phi_m(3)))
    items.append(("word", build_freeassoc_monomial((0, 1, 1))))
    items.append(("poly", Ring(QQ, 3).parse("-3/2*x^2 + 7/5*y*z - 1/3")))
    items.append(("endo", Endo.from_strings(Ring(QQ, 5), ["x1 + x2*x5", "x2", "x3", "x4 - x1^3", "x5"])))
    return items


CORPUS = corpus()


def test_corpus_size():
    assert len(CORPUS) >= 50


@pytest.mark.parametrize("kind,obj", CORPUS, ids=[f"{k}{i}" for i, (k, _) in enumerate(CORPUS)])
def test_round_trip(kind, obj):
    if kind == "poly":
        text = str(obj)
        back = obj.ring.parse(text)
        assert back == obj and str(back) == text
    elif kind == "endo":
        text = format_endo(obj)
        back = parse_endo(text)
        assert back == obj and format_endo(back) == text
    else:
        text = format_word(obj)
        back = parse_word(text)
        assert back == obj and format_word(back) == text


def test_endo_header_and_lines():
    text = format_endo(nagata())
    assert text.splitlines()[0] == "endo comm n=3 field=Q"
    assert text.splitlines()[2] == "y -> y + y^2*z + x*z^2"


def test_comments_and_any_order():
    text = "# a comment\nendo free n=2 field=F5\n\ny -> y + x*x\nx -> x\n"
    phi = parse_any(text)
    assert phi.ring == Ring(Field(5), 2, True)
    assert phi.images[1] == phi.ring.parse("y + x^2")


@pytest.mark.parametrize("text,line,col", [
    ("endo comm n=3 field=Q\nx -> x +\ny -> y\nz -> z\n", 2, 9),
    ("endo comm n=2 field=Q\nx -> x\nw -> y\n", 3, 1),
    ("endo comm n=2 field=Q\nx -> x\n", 3, 1),
    ("endo comm n=2 field=F4\nx -> x\ny -> y\n", 1, 15),
    ("endo comm n=2 field=Q\nx -> x\nx -> y\n", 3, 1),
    ("wordz\n", 1, 1),
    ("word comm n=2 field=Q\nelem 3 x\n", 2, 6),
    ("word comm n=2 field=Q\nlin [[1,0]]\n", 2, 5),
    ("word comm n=2 field=Q\nelem 1 y + q\n", 2, 12),
    ("", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_any(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_word_inverse_suffix():
    ring = Ring(QQ, 3)
    w = parse_word("word comm n=3 field=Q\nelem 3 x*y ^-1\nlin [[0,1,0],[1,0,0],[0,0,1]]^-1\n")
    assert [e for _, e in w.letters] == [-1, -1]
    assert w.letters[0][0].poly == ring.parse("x*y")
