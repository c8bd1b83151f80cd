"""Plain-text file formats for endomorphisms and tame words.

Endo file::

    endo comm n=3 field=Q
    x -> x + y^2
    y -> y
    z -> z

Word file (generator indices are 1-based)::

    word comm n=3 field=Q
    lin [[0,1,0],[1,0,0],[0,0,1]]
    elem 3 x*y ^-1

Blank lines and lines starting with ``#`` are ignored. Printing then parsing
is the identity, and parsing then printing is byte-exact on canonical text.
"""

from __future__ import annotations

import re

from .endo import Endo
from .expr import ParseError, parse_polynomial, parse_scalar
from .field import Field
from .poly import Ring
from .tame import Elementary, Linear, TameWord

_HEADER = re.compile(r"(endo|word)\s+(comm|free)\s+n=(\d+)\s+field=(\S+)\s*$")


def format_header(kind: str, ring: Ring) -> str:
    return f"{kind} {ring.variant} n={ring.n} field={ring.field.name}"


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield no, raw


def parse_header(line: str, no: int, kind: str) -> Ring:
    m = _HEADER.match(line.strip())
    if not m:
        raise ParseError(f"expected header '{kind} <comm|free> n=<n> field=<Q|Fp>'", no, 1)
    if m.group(1) != kind:
        raise ParseError(f"expected a {kind} file, found a {m.group(1)} header", no, 1)
    n = int(m.group(3))
    if n < 1:
        raise ParseError("n must be >= 1", no, line.index("n=") + 1)
    try:
        field = Field.parse(m.group(4))
    except ValueError as exc:
        raise ParseError(str(exc), no, line.index("field=") + 1) from None
    return Ring(field, n, m.group(2) == "free")


def _split_body(text: str, kind: str):
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(f"empty input; expected a {kind} header", 1, 1)
    no, head = lines[0]
    return parse_header(head, no, kind), lines[1:]


# endo files

def format_endo(phi: Endo) -> str:
    return format_header("endo", phi.ring) + "\n" + str(phi) + "\n"


def parse_endo(text: str) -> Endo:
    ring, body = _split_body(text, "endo")
    index = {name: i for i, name in enumerate(ring.names)}
    index.update({f"x{i + 1}": i for i in range(ring.n)})
    images = [None] * ring.n
    for no, raw in body:
        arrow = raw.find("->")
        if arrow < 0:
            raise ParseError("expected '<generator> -> <polynomial>'", no, 1)
        lhs = raw[:arrow].strip()
        if lhs not in index:
            raise ParseError(f"unknown generator {lhs!r}", no, len(raw) - len(raw.lstrip()) + 1)
        i = index[lhs]
        if images[i] is not None:
            raise ParseError(f"generator {lhs} assigned twice", no, 1)
        images[i] = parse_polynomial(raw[arrow + 2:], ring, no, arrow + 3)
    missing = [ring.names[i] for i, p in enumerate(images) if p is None]
    if missing:
        last = body[-1][0] + 1 if body else 2
        raise ParseError(f"missing image for {', '.join(missing)}", last, 1)
    return Endo(ring, tuple(images))


# word files

def _format_matrix(field: Field, matrix) -> str:
    return "[" + ",".join("[" + ",".join(field.format(c) for c in row) + "]" for row in matrix) + "]"


def format_letter(ring: Ring, gen, exp: int) -> str:
    if isinstance(gen, Linear):
        body = "lin " + _format_matrix(ring.field, gen.matrix)
    else:
        body = f"elem {gen.index + 1} {gen.poly}"
    return body + (" ^-1" if exp == -1 else "")


def format_word(w: TameWord) -> str:
    lines = [format_header("word", w.ring)]
    lines += [format_letter(w.ring, g, e) for g, e in w.letters]
    return "\n".join(lines) + "\n"


_INV = re.compile(r"\s*\^\s*-\s*1\s*$")


def _parse_matrix(text: str, ring: Ring, no: int, col: int):
    s = text.strip()
    if not (s.startswith("[[") and s.endswith("]]")):
        raise ParseError("expected a matrix like [[1,0],[0,1]]", no, col)
    rows = []
    for chunk in s[2:-2].split("],["):
        try:
            rows.append(tuple(parse_scalar(c, ring.field) for c in chunk.split(",")))
        except ParseError as exc:
            raise ParseError(exc.message, no, col) from None
    if len(rows) != ring.n or any(len(r) != ring.n for r in rows):
        raise ParseError(f"matrix must be {ring.n}x{ring.n}", no, col)
    return tuple(rows)


def parse_letter(raw: str, ring: Ring, no: int):
    exp = 1
    m = _INV.search(raw)
    if m:
        exp = -1
        raw = raw[:m.start()]
    lead = len(raw) - len(raw.lstrip())
    s = raw.strip()
    kw, _, rest = s.partition(" ")
    rest_col = lead + len(kw) + 2 + (len(rest) - len(rest.lstrip()))
    if kw == "lin":
        gen = Linear(_parse_matrix(rest, ring, no, rest_col))
    elif kw == "elem":
        idx_text, _, poly_text = rest.strip().partition(" ")
        if not idx_text.isdigit() or not 1 <= int(idx_text) <= ring.n:
            raise ParseError(f"generator index must be in 1..{ring.n}", no, rest_col)
        poly_col = raw.index(poly_text, rest_col - 1) + 1 if poly_text else rest_col
        gen = Elementary(int(idx_text) - 1, parse_polynomial(poly_text, ring, no, poly_col))
    else:
        raise ParseError(f"unknown letter kind {kw!r} (expected lin or elem)", no, lead + 1)
    try:
        gen.check(ring)
    except ValueError as exc:
        raise ParseError(str(exc), no, lead + 1) from None
    return gen, exp


def parse_word(text: str) -> TameWord:
    ring, body = _split_body(text, "word")
    letters = tuple(parse_letter(raw, ring, no) for no, raw in body)
    return TameWord(ring, letters)


def parse_any(text: str):
    """Parse either an endo file or a word file, dispatching on the header."""
    for _, raw in _content_lines(text):
        if raw.strip().startswith("word"):
            return parse_word(text)
        return parse_endo(text)
    raise ParseError("empty input", 1, 1)
