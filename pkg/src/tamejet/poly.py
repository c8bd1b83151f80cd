"""Sparse exact polynomials, commutative or free associative.

A :class:`Ring` fixes the coefficient field, the number of generators and the
variant. Commutative monomials are exponent tuples of length ``n``; free
monomials are words, i.e. tuples of 0-based generator indices.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .field import Field

ALIASES = ("x", "y", "z", "t")


@dataclass(frozen=True)
class Ring:
    field: Field
    n: int
    free: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one generator")

    @property
    def variant(self) -> str:
        return "free" if self.free else "comm"

    @property
    def names(self) -> tuple[str, ...]:
        if self.n <= len(ALIASES):
            return ALIASES[: self.n]
        return tuple(f"x{i + 1}" for i in range(self.n))

    def __str__(self):
        return f"{self.variant} n={self.n} field={self.field.name}"

    def with_variant(self, free: bool) -> "Ring":
        return Ring(self.field, self.n, free)

    # monomials

    def unit_monomial(self):
        return () if self.free else (0,) * self.n

    def gen_monomial(self, i: int):
        if self.free:
            return (i,)
        return tuple(int(j == i) for j in range(self.n))

    def monomials(self, degree: int):
        """All monomials of the given total degree, in canonical order."""
        if self.free:
            return [w for w in product(range(self.n), repeat=degree)]
        out = []
        for combo in combinations_with_replacement(range(self.n), degree):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return sorted(out)

    # constructors

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {self.unit_monomial(): self.field(c)})

    def gen(self, i: int) -> "Polynomial":
        if not 0 <= i < self.n:
            raise IndexError(f"generator index {i} out of range for n={self.n}")
        return Polynomial(self, {self.gen_monomial(i): 1})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.n))

    def monomial(self, mon, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(mon): self.field(coeff)})

    def parse(self, text: str) -> "Polynomial":
        from .expr import parse_polynomial

        return parse_polynomial(text, self)


def mon_degree(mon, free: bool) -> int:
    return len(mon) if free else sum(mon)


def mon_key(mon, free: bool):
    return (mon_degree(mon, free), mon)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        f = ring.field
        clean = {}
        for m, c in terms.items():
            c = f.reduce(c)
            if c != 0:
                clean[m] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Polynomial":
        # terms already reduced and pruned
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # basic queries

    @property
    def free(self) -> bool:
        return self.ring.free

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mon_degree(m, self.free) for m in self.terms)

    def low_degree(self) -> int:
        """Lowest degree of a nonzero term; -1 for zero."""
        if not self.terms:
            return -1
        return min(mon_degree(m, self.free) for m in self.terms)

    def coeff(self, mon):
        return self.terms.get(tuple(mon), 0)

    def constant_term(self):
        return self.terms.get(self.ring.unit_monomial(), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mon_key(kv[0], self.free))

    def homogeneous(self, d: int) -> "Polynomial":
        fr = self.free
        return Polynomial._raw(self.ring, {m: c for m, c in self.terms.items() if mon_degree(m, fr) == d})

    def truncate(self, N: int) -> "Polynomial":
        """Drop every monomial of total degree >= N (reduction modulo I^N)."""
        if N < 1:
            raise ValueError("truncation order must be >= 1")
        fr = self.free
        return Polynomial._raw(self.ring, {m: c for m, c in self.terms.items() if mon_degree(m, fr) < N})

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            if self.free:
                out.update(m)
            else:
                out.update(i for i, e in enumerate(m) if e)
        return out

    def involves(self, i: int) -> bool:
        return i in self.variables()

    def degree_in(self, i: int, mon) -> int:
        return mon.count(i) if self.free else mon[i]

    def graded_by(self, i: int) -> dict[int, "Polynomial"]:
        """Split into pieces by degree in generator ``i``."""
        pieces: dict[int, dict] = {}
        for m, c in self.terms.items():
            pieces.setdefault(self.degree_in(i, m), {})[m] = c
        return {k: Polynomial._raw(self.ring, v) for k, v in sorted(pieces.items())}

    # arithmetic

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = f.reduce(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Polynomial._raw(self.ring, {m: f.reduce(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c) if not isinstance(c, int) or f.char else c
        if f.is_zero(c):
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: f.reduce(v * c) for m, v in self.terms.items()})

    def mul(self, other: "Polynomial", N: int | None = None) -> "Polynomial":
        """Product, optionally dropping every term of degree >= N."""
        self._check(other)
        f = self.ring.field
        fr = self.free
        acc: dict = {}
        if fr:
            join = operator.add
        else:
            def join(a, b):
                return tuple(map(operator.add, a, b))
        if N is None:
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = join(m1, m2)
                    acc[m] = acc.get(m, 0) + c1 * c2
        else:
            left = [(m, c, mon_degree(m, fr)) for m, c in self.terms.items()]
            right = sorted(((m, c, mon_degree(m, fr)) for m, c in other.terms.items()), key=lambda t: t[2])
            for m1, c1, d1 in left:
                for m2, c2, d2 in right:
                    if d1 + d2 >= N:
                        break
                    m = join(m1, m2)
                    acc[m] = acc.get(m, 0) + c1 * c2
        out = {}
        for m, c in acc.items():
            c = f.reduce(c)
            if c:
                out[m] = c
        return Polynomial._raw(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Polynomial):
            return other.mul(self)
        return self.scale(other)

    def pow(self, e: int, N: int | None = None) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result.mul(base, N)
            e >>= 1
            if e:
                base = base.mul(base, N)
        return result

    def __pow__(self, e: int):
        return self.pow(e)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # substitution

    def substitute(self, images, N: int | None = None) -> "Polynomial":
        """Apply the algebra homomorphism x_i -> images[i]; truncate below N if given.

        Images must share field and variant with ``self`` (their generator
        count may differ). In the free variant letters are replaced in order.
        """
        images = list(images)
        if len(images) != self.ring.n:
            raise ValueError(f"expected {self.ring.n} images, got {len(images)}")
        if not images:
            raise ValueError("no images")
        target = images[0].ring
        for im in images:
            if im.ring != target:
                raise ValueError("images live in different rings")
        if target.field != self.ring.field or target.free != self.ring.free:
            raise ValueError(f"cannot substitute {target} images into {self.ring}")
        if N is not None:
            images = [im.truncate(N) for im in images]
        fr = self.free
        memo: dict = {self.ring.unit_monomial(): target.one()}

        def value(mon):
            got = memo.get(mon)
            if got is not None:
                return got
            if fr:
                got = value(mon[:-1]).mul(images[mon[-1]], N)
            else:
                i = max(j for j, e in enumerate(mon) if e)
                prev = mon[:i] + (mon[i] - 1,) + mon[i + 1:]
                got = value(prev).mul(images[i], N)
            memo[mon] = got
            return got

        f = target.field
        acc: dict = {}
        for mon, c in sorted(self.terms.items(), key=lambda kv: mon_key(kv[0], fr)):
            for m, v in value(mon).terms.items():
                acc[m] = acc.get(m, 0) + c * v
        out = {}
        for m, c in acc.items():
            c = f.reduce(c)
            if c:
                out[m] = c
        return Polynomial._raw(target, out)

    def __call__(self, *images):
        return self.substitute(images)

    # calculus and structure maps

    def derivative(self, i: int) -> "Polynomial":
        if self.free:
            raise ValueError("partial derivatives are only defined for commutative polynomials")
        out = {}
        f = self.ring.field
        for m, c in self.terms.items():
            if m[i]:
                nm = m[:i] + (m[i] - 1,) + m[i + 1:]
                v = f.reduce(c * m[i])
                if v:
                    out[nm] = v
        return Polynomial._raw(self.ring, out)

    def abelianize(self) -> "Polynomial":
        """Image under the projection from the free algebra to the polynomial ring."""
        if not self.free:
            raise ValueError("abelianize expects a free-variant polynomial")
        ring = self.ring.with_variant(False)
        acc: dict = {}
        for w, c in self.terms.items():
            e = [0] * ring.n
            for i in w:
                e[i] += 1
            e = tuple(e)
            acc[e] = acc.get(e, 0) + c
        return Polynomial(ring, acc)

    def reverse(self) -> "Polynomial":
        """Apply the mirror anti-automorphism: every word is reversed."""
        if not self.free:
            raise ValueError("reverse expects a free-variant polynomial")
        return Polynomial._raw(self.ring, {w[::-1]: c for w, c in self.terms.items()})

    def relabel(self, perm, ring: Ring | None = None) -> "Polynomial":
        """Rename generator i to perm[i] (optionally into a larger ring)."""
        ring = ring or self.ring
        if self.free:
            return Polynomial._raw(ring, {tuple(perm[i] for i in w): c for w, c in self.terms.items()})
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.n
            for i, k in enumerate(m):
                e[perm[i]] += k
            out[tuple(e)] = c
        return Polynomial._raw(ring, out)

    # printing

    def __str__(self):
        from .expr import format_polynomial

        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.ring.variant}, n={self.ring.n}, {self.ring.field.name}: {self})"
