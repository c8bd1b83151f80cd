"""Text grammar for polynomials and their canonical printing.

Grammar (whitespace is insignificant)::

    expr   := [+|-] term ((+|-) term)*
    term   := factor ((*|/) factor)*
    factor := (+|-) factor | base [^ INT]
    base   := INT | IDENT | ( expr )

``/`` is only allowed with a nonzero constant divisor. Generators are
``x1..xn``; for n <= 4 the aliases ``x, y, z, t`` are accepted as well.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import Polynomial, Ring


class ParseError(ValueError):
    """A syntax or semantic error at a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _tokenize(text: str, line: int, col0: int):
    tokens = []
    for m in _TOKEN.finditer(text):
        num, ident, sym = m.groups()
        col = col0 + m.start()
        if num is not None:
            tokens.append(("num", int(num), col))
        elif ident is not None:
            tokens.append(("id", ident, col))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}", line, col)
            tokens.append((sym, sym, col))
    tokens.append(("end", None, col0 + len(text.rstrip())))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring, line: int, col0: int):
        self.ring = ring
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.names = {f"x{k + 1}": k for k in range(ring.n)}
        for k, alias in enumerate(ring.names):
            self.names[alias] = k

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs_tok = self.peek()
            rhs = self.factor()
            if op[0] == "*":
                acc = acc * rhs
            else:
                if rhs.degree() > 0:
                    raise self.error("division by a non-constant", rhs_tok)
                c = rhs.constant_term()
                f = self.ring.field
                if f.is_zero(c):
                    raise self.error(f"division by zero in {f.name}", rhs_tok)
                acc = acc.scale(f.inv(c))
        return acc

    def factor(self):
        if self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            inner = self.factor()
            return -inner if op == "-" else inner
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "-":
                neg = True
                self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be a nonnegative integer", tok)
            if neg:
                raise self.error("negative exponents are not supported", tok)
            b = b.pow(tok[1])
        return b

    def base(self):
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            f = self.ring.field
            if f.char == 0:
                return self.ring.const(tok[1])
            return self.ring.const(tok[1] % f.char)
        if kind == "id":
            k = self.names.get(tok[1])
            if k is None:
                raise self.error(f"unknown generator {tok[1]!r} (n={self.ring.n})", tok)
            return self.ring.gen(k)
        if kind == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != ")":
                raise self.error("expected ')'", close)
            return inner
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok[1]!r}", tok)


def parse_polynomial(text: str, ring: Ring, line: int = 1, col: int = 1) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    ``line`` and ``col`` locate ``text`` inside a larger file so errors point
    at the right place.
    """
    return _Parser(text, ring, line, col).parse()


def parse_scalar(text: str, field):
    """Parse a scalar literal such as ``-3/2`` into ``field``."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {text!r}") from exc
    try:
        return field(value)
    except ZeroDivisionError as exc:
        raise ParseError(f"{text} is not defined in {field.name}") from exc


def format_monomial(mon, ring: Ring) -> str:
    names = ring.names
    parts = []
    if ring.free:
        i = 0
        while i < len(mon):
            j = i
            while j < len(mon) and mon[j] == mon[i]:
                j += 1
            run = j - i
            parts.append(names[mon[i]] if run == 1 else f"{names[mon[i]]}^{run}")
            i = j
    else:
        for k, e in enumerate(mon):
            if e:
                parts.append(names[k] if e == 1 else f"{names[k]}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    f = p.ring.field
    out = []
    for mon, c in p.sorted_terms():
        neg = f.char == 0 and c < 0
        mag = -c if neg else c
        body = format_monomial(mon, p.ring)
        if not body:
            piece = f.format(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{f.format(mag)}*{body}"
        if not out:
            out.append(f"-{piece}" if neg else piece)
        else:
            out.append(f" - {piece}" if neg else f" + {piece}")
    return "".join(out)
