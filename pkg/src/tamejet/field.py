"""Exact coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """A coefficient field of characteristic 0 (Q) or a prime p (F_p).

    Elements of Q are ints or Fractions; elements of F_p are ints in [0, p).
    """

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or prime, got {self.char}")

    @classmethod
    def parse(cls, name: str) -> "Field":
        name = name.strip()
        if name in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"F_?(\d+)|GF\((\d+)\)", name)
        if not m:
            raise ValueError(f"unknown field {name!r} (expected Q or Fp, e.g. F5)")
        return cls(int(m.group(1) or m.group(2)))

    @property
    def name(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"

    def __str__(self):
        return self.name

    @property
    def size(self) -> float:
        return float("inf") if self.char == 0 else self.char

    # element handling

    def __call__(self, value) -> int | Fraction:
        """Coerce an int, Fraction or literal string like ``-3/2`` into the field."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.char == 0:
            return self.reduce(Fraction(value))
        if isinstance(value, Fraction):
            return self.div(value.numerator, value.denominator)
        return int(value) % self.char

    def reduce(self, c):
        if self.char:
            return c % self.char
        if type(c) is int:
            return c
        return c.numerator if c.denominator == 1 else c

    def is_zero(self, c) -> bool:
        return c == 0 if self.char == 0 else c % self.char == 0

    def inv(self, c):
        if self.is_zero(c):
            raise ZeroDivisionError(f"{c} is not invertible in {self.name}")
        if self.char:
            return pow(int(c), -1, self.char)
        return self.reduce(1 / Fraction(c))

    def div(self, a, b):
        if self.char:
            b = int(b) % self.char
            if b == 0:
                raise ZeroDivisionError(f"division by zero in {self.name}")
            return int(a) * pow(b, -1, self.char) % self.char
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return self.reduce(Fraction(a) / Fraction(b))

    def pow(self, c, e: int):
        if e < 0:
            return self.pow(self.inv(c), -e)
        if self.char:
            return pow(int(c), e, self.char)
        return self.reduce(Fraction(c) ** e)

    def neg(self, c):
        return self.reduce(-c)

    def elements(self, count: int):
        """The first ``count`` distinct elements 0, 1, 2, ...; raises if the field is too small."""
        if self.char and count > self.char:
            raise ValueError(f"{self.name} has fewer than {count} elements")
        return [self(i) for i in range(count)]

    def format(self, c) -> str:
        c = self.reduce(c)
        if isinstance(c, Fraction):
            return f"{c.numerator}/{c.denominator}"
        return str(c)


QQ = Field(0)
