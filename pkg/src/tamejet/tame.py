"""Tame generators, words, and constructive generation of elementary maps.

Every builder returns a :class:`TameWord`; evaluating the word is the proof
that it realizes the requested map. Builders only emit invertible linear maps
and the single elementary map ``psi: z -> z + x*y`` (scaled copies of ``psi``
are produced by conjugating with a diagonal linear map).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb
from typing import Union

from . import linalg
from .endo import Endo, compose
from .field import QQ, Field
from .poly import Polynomial, Ring

X, Y, Z, T = 0, 1, 2, 3


@dataclass(frozen=True)
class Linear:
    """x_i -> sum_j matrix[i][j] x_j."""

    matrix: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))

    def check(self, ring: Ring):
        if len(self.matrix) != ring.n or any(len(r) != ring.n for r in self.matrix):
            raise ValueError(f"linear generator must be {ring.n}x{ring.n}")
        if linalg.det(ring.field, self.matrix) == 0:
            raise ValueError("linear generator is singular")

    def endo(self, ring: Ring, exp: int = 1) -> Endo:
        m = self.matrix if exp == 1 else linalg.inverse(ring.field, self.matrix)
        return Endo.linear(ring, m)


@dataclass(frozen=True)
class Elementary:
    """x_index -> x_index + poly, where poly does not involve x_index."""

    index: int
    poly: Polynomial

    def check(self, ring: Ring):
        if self.poly.ring != ring:
            raise ValueError("elementary polynomial lives in the wrong ring")
        if not 0 <= self.index < ring.n:
            raise ValueError(f"generator index {self.index} out of range")
        if self.poly.involves(self.index):
            raise ValueError(f"elementary polynomial must not involve {ring.names[self.index]}")

    def endo(self, ring: Ring, exp: int = 1) -> Endo:
        p = self.poly if exp == 1 else -self.poly
        return Endo.elementary(ring, self.index, p)


TameGen = Union[Linear, Elementary]


@dataclass(frozen=True)
class TameWord:
    """A sequence of (generator, exponent) letters, evaluated left to right."""

    ring: Ring
    letters: tuple[tuple[TameGen, int], ...] = ()

    def __post_init__(self):
        letters = tuple((g, int(e)) for g, e in self.letters)
        object.__setattr__(self, "letters", letters)
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +1 or -1")
            g.check(self.ring)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "TameWord") -> "TameWord":
        if other.ring != self.ring:
            raise ValueError("cannot concatenate words over different rings")
        return TameWord(self.ring, self.letters + other.letters)

    def inverse(self) -> "TameWord":
        return word_inverse(self)

    def conjugate(self, s: "TameWord") -> "TameWord":
        """s^-1 + self + s; evaluates to compose(s^-1, self, s)."""
        return s.inverse() + self + s

    def generators(self):
        return [g for g, _ in self.letters]


def letter_endo(ring: Ring, gen: TameGen, exp: int) -> Endo:
    return gen.endo(ring, exp)


def eval_word(w: TameWord, N: int | None = None) -> Endo:
    """Evaluate the word, optionally modulo I^N."""
    from .endo import compose_mod

    ring = w.ring
    acc = Endo.identity(ring)
    for g, e in reversed(w.letters):
        step = g.endo(ring, e)
        acc = compose(step, acc) if N is None else compose_mod(step, acc, N)
    return acc


def word_inverse(w: TameWord) -> TameWord:
    return TameWord(w.ring, tuple((g, -e) for g, e in reversed(w.letters)))


def word(ring: Ring, *letters) -> TameWord:
    """Build a word from generators or (generator, exp) pairs."""
    out = []
    for item in letters:
        out.append(item if isinstance(item, tuple) else (item, 1))
    return TameWord(ring, tuple(out))


# small generator factories

def perm_linear(ring: Ring, perm) -> Linear:
    """Linear map x_i -> x_{perm[i]}."""
    f = ring.field
    return Linear(tuple(tuple(f(int(j == perm[i])) for j in range(ring.n)) for i in range(ring.n)))


def diag_linear(ring: Ring, scalars) -> Linear:
    f = ring.field
    return Linear(tuple(tuple(f(scalars[i]) if i == j else f(0) for j in range(ring.n)) for i in range(ring.n)))


def shear_linear(ring: Ring, target: int, coeffs) -> Linear:
    """x_target -> x_target + sum_j coeffs[j] x_j (coeffs[target] ignored)."""
    f = ring.field
    rows = []
    for i in range(ring.n):
        row = [f(int(i == j)) for j in range(ring.n)]
        if i == target:
            for j, c in enumerate(coeffs):
                if j != target:
                    row[j] = f(c)
        rows.append(tuple(row))
    return Linear(tuple(rows))


def relabel(w: TameWord, perm) -> TameWord:
    """Conjugate by the permutation x_i -> x_{perm[i]}; generator j is renamed perm[j]."""
    if list(perm) == list(range(w.ring.n)):
        return w
    return w.conjugate(word(w.ring, perm_linear(w.ring, perm)))


def psi_gen(ring: Ring) -> Elementary:
    """The distinguished elementary map z -> z + x*y."""
    if ring.n < 3:
        raise ValueError("psi needs at least three generators")
    return Elementary(Z, ring.gen(X) * ring.gen(Y))


def scaled_psi(ring: Ring, c) -> TameWord:
    """z -> z + c*x*y, as psi conjugated by x -> c x."""
    f = ring.field
    c = f(c)
    if c == 0:
        return TameWord(ring)
    w = word(ring, psi_gen(ring))
    if c == 1:
        return w
    scal = [1] * ring.n
    scal[X] = c
    return w.conjugate(word(ring, diag_linear(ring, scal)))


def _default_ring(ring: Ring | None, field: Field | None) -> Ring:
    if ring is None:
        return Ring(field or QQ, 3)
    return ring


# commutative generation (three variables, plus the free n=4 reuse)

def build_phi_m(m: int, b=1, field: Field | None = None, ring: Ring | None = None) -> TameWord:
    """Word for z -> z + b x^m using only linear maps and psi.

    Induction: with Q: y -> y + b x^(m-1) (the m-1 case with y and z swapped),
    Q^-1 psi Q sends z -> z + xy + b x^m, and a trailing psi^-1 removes xy.
    Works verbatim in the free algebra.
    """
    ring = _default_ring(ring, field)
    if m < 1:
        raise ValueError("m must be >= 1")
    b = ring.field(b)
    if m == 1:
        coeffs = [0] * ring.n
        coeffs[X] = b
        return word(ring, shear_linear(ring, Z, coeffs))
    prev = build_phi_m(m - 1, b, ring=ring)
    swap = list(range(ring.n))
    swap[Y], swap[Z] = Z, Y
    q = relabel(prev, swap)
    psi = word(ring, psi_gen(ring))
    return q.inverse() + psi + q + psi.inverse()


def pure_power_word(ring: Ring, target: int, source: int, k: int, c) -> TameWord:
    """Word for x_target -> x_target + c x_source^k."""
    if ring.field(c) == 0:
        return TameWord(ring)
    base = build_phi_m(k, c, ring=ring)
    perm = _perm_sending(ring.n, {Z: target, X: source})
    return relabel(base, perm)


def _perm_sending(n: int, fixed: dict[int, int]):
    """A permutation extending the partial map ``fixed``."""
    perm = [None] * n
    for a, b in fixed.items():
        perm[a] = b
    rest = [j for j in range(n) if j not in fixed.values()]
    for i in range(n):
        if perm[i] is None:
            perm[i] = rest.pop(0)
    return perm


def _weights(field: Field, rows, rhs):
    """c_j with sum_j c_j t_j^i = rhs[i] for i in rows, at points t_j = 0, 1, 2, ..."""
    points = field.elements(len(rows))
    matrix = [[field.pow(t, i) if (t != 0 or i != 0) else field(1) for t in points] for i in rows]
    sol = linalg.solve(field, matrix, rhs)
    if sol is None:
        raise ValueError("Vandermonde system is inconsistent")
    return list(zip(points, sol))


def _nonzero_binomial_rows(field: Field, n: int):
    return [i for i in range(n + 1) if not field.is_zero(field(comb(n, i)))]


def _route_sheared_power(ring: Ring, k: int, l: int, b) -> TameWord:
    """Combine conjugates of z -> z + c x^n by x -> x + t y; needs C(n, l) != 0."""
    f = ring.field
    n = k + l
    rows = _nonzero_binomial_rows(f, n)
    if l not in rows:
        raise ValueError(f"C({n},{l}) vanishes in {f.name}")
    rhs = [f.div(b, comb(n, l)) if i == l else f(0) for i in rows]
    out = TameWord(ring)
    for t, c in _weights(f, rows, rhs):
        if c == 0:
            continue
        inner = build_phi_m(n, c, ring=ring)
        coeffs = [0] * ring.n
        coeffs[Y] = t
        out = out + inner.conjugate(word(ring, shear_linear(ring, X, coeffs)))
    return out


def _route_sheared_alpha(ring: Ring, k: int, l: int, b) -> TameWord:
    """Combine conjugates of z -> z + c x^(n-1) y by x -> x + t y; needs C(n-1, l-1) != 0."""
    f = ring.field
    n = k + l
    if l < 1 or n < 2:
        raise ValueError("route needs l >= 1 and degree >= 2")
    rows = _nonzero_binomial_rows(f, n - 1)
    if l - 1 not in rows:
        raise ValueError(f"C({n - 1},{l - 1}) vanishes in {f.name}")
    rhs = [f.div(b, comb(n - 1, l - 1)) if i == l - 1 else f(0) for i in rows]
    out = TameWord(ring)
    for t, c in _weights(f, rows, rhs):
        if c == 0:
            continue
        inner = build_alpha_m(n - 1, c, ring=ring)
        coeffs = [0] * ring.n
        coeffs[Y] = t
        out = out + inner.conjugate(word(ring, shear_linear(ring, X, coeffs)))
    return out


def _route_substitution(ring: Ring, k: int, l: int, b, mirrored: bool) -> TameWord:
    """Conjugate z -> z + a u^(k+1) by u -> u + c v^l and keep the linear-in-c term."""
    f = ring.field
    if mirrored:
        k, l = l, k
        u, v = Y, X
    else:
        u, v = X, Y
    if k < 1 or l < 1:
        raise ValueError("route needs a mixed monomial")
    rows = _nonzero_binomial_rows(f, k + 1)
    if 1 not in rows:
        raise ValueError(f"{k + 1} vanishes in {f.name}")
    rhs = [f.div(b, k + 1) if i == 1 else f(0) for i in rows]
    out = TameWord(ring)
    for c, a in _weights(f, rows, rhs):
        if a == 0:
            continue
        inner = pure_power_word(ring, Z, u, k + 1, a)
        if c == 0:
            out = out + inner
            continue
        out = out + inner.conjugate(pure_power_word(ring, u, v, l, c))
    return out


ROUTES = ("sheared-power", "sheared-alpha", "substitution", "substitution-mirror")


def build_monomial_xkyl(k: int, l: int, b=1, field: Field | None = None,
                        ring: Ring | None = None, route: str | None = None) -> TameWord:
    """Word for z -> z + b x^k y^l in three commuting variables.

    Tries the routes in ``ROUTES`` order (or only ``route``) and uses the
    first one whose binomial coefficients and point count fit the field.
    """
    ring = _default_ring(ring, field)
    f = ring.field
    if f.char == 2:
        raise ValueError("characteristic 2 is not supported by these constructions")
    if k < 0 or l < 0:
        raise ValueError("exponents must be nonnegative")
    if k + l == 0:
        raise ValueError("a constant shift is not generated by linear maps and psi")
    b = f(b)
    if b == 0:
        return TameWord(ring)
    if l == 0:
        return pure_power_word(ring, Z, X, k, b)
    if k == 0:
        return pure_power_word(ring, Z, Y, l, b)
    chosen = ROUTES if route is None else (route,)
    reasons = []
    for name in chosen:
        try:
            return _build_route(ring, name, k, l, b)
        except ValueError as exc:
            reasons.append(f"{name}: {exc}")
    raise ValueError(f"no valid route for x^{k}*y^{l} over {f.name} ({'; '.join(reasons)})")


def _build_route(ring, name, k, l, b):
    if name == "sheared-power":
        return _route_sheared_power(ring, k, l, b)
    if name == "sheared-alpha":
        return _route_sheared_alpha(ring, k, l, b)
    if name == "substitution":
        return _route_substitution(ring, k, l, b, mirrored=False)
    if name == "substitution-mirror":
        return _route_substitution(ring, k, l, b, mirrored=True)
    raise ValueError(f"unknown route {name!r}")


def monomial_route(k: int, l: int, field: Field) -> str:
    """Name of the route build_monomial_xkyl would take."""
    if k == 0 or l == 0:
        return "power"
    ring = Ring(field, 3)
    for name in ROUTES:
        try:
            _build_route(ring, name, k, l, field(1))
            return name
        except ValueError:
            continue
    return "none"


def build_alpha_m(m: int, b=1, field: Field | None = None, ring: Ring | None = None) -> TameWord:
    """Word for z -> z + b y x^m.

    With b' = b/2 and sigma: x -> x + y + b' x^m, y -> y + b' x^m, the
    conjugate sigma^-1 psi sigma sends z -> z + xy + y^2 + b' x^(m+1)
    + 2b' y x^m + b'^2 x^(2m); the extra monomials are removed with psi^-1 and
    pure-power words.
    """
    ring = _default_ring(ring, field)
    f = ring.field
    if f.char == 2:
        raise ValueError("characteristic 2 is not supported by this construction")
    if m < 1:
        raise ValueError("m must be >= 1")
    b = f(b)
    if b == 0:
        return TameWord(ring)
    half = f.div(b, 2)
    coeffs = [0] * ring.n
    coeffs[Y] = 1
    beta = word(ring, shear_linear(ring, X, coeffs))
    e = pure_power_word(ring, Y, X, m, half)
    sigma = beta + e
    gamma = word(ring, psi_gen(ring)).conjugate(sigma)
    x, y = ring.gen(X), ring.gen(Y)
    residual = (x + y + x.pow(m).scale(half)) * (y + x.pow(m).scale(half)) - (y * x.pow(m)).scale(b)
    return gamma + _cancel_simple(ring, -residual)


def _cancel_simple(ring: Ring, poly: Polynomial) -> TameWord:
    """Word adding ``poly`` to z, where poly only has xy and pure powers of x, y."""
    out = TameWord(ring)
    for mon, c in poly.sorted_terms():
        ex, ey = (mon[X], mon[Y]) if not ring.free else (mon.count(X), mon.count(Y))
        if ex and ey:
            if (ex, ey) != (1, 1) or (ring.free and tuple(mon) != (X, Y)):
                raise ValueError(f"cannot cancel monomial {mon}")
            out = out + scaled_psi(ring, c)
        elif ex:
            out = out + pure_power_word(ring, Z, X, ex, c)
        else:
            out = out + pure_power_word(ring, Z, Y, ey, c)
    return out


def build_alpha_P(P: Polynomial) -> TameWord:
    """Word for z -> z + P(x, y): one linear letter for the linear part, then one word per monomial."""
    ring = P.ring
    if ring.n != 3 or ring.free:
        raise ValueError("build_alpha_P works in three commuting variables")
    if ring.field.char == 2:
        raise ValueError("characteristic 2 is not supported by these constructions")
    if P.involves(Z):
        raise ValueError("P must not involve z")
    if P.constant_term() != 0:
        raise ValueError("a constant shift is not generated by linear maps and psi")
    out = TameWord(ring)
    lin = P.homogeneous(1)
    if lin:
        coeffs = [lin.coeff(ring.gen_monomial(j)) for j in range(ring.n)]
        out = out + word(ring, shear_linear(ring, Z, coeffs))
    for mon, c in P.sorted_terms():
        if sum(mon) >= 2:
            out = out + build_monomial_xkyl(mon[X], mon[Y], c, ring=ring)
    return out


# free associative generation (four variables)

def height(M) -> int:
    """Number of maximal single-letter runs in a word over two letters."""
    M = tuple(M)
    letters = set(M)
    if not letters <= {X, Y}:
        raise ValueError("height is defined for words in the first two generators")
    return sum(1 for i, a in enumerate(M) if i == 0 or M[i - 1] != a)


def build_freeassoc_monomial(M, b=1, target: int = Z, field: Field | None = None,
                             ring: Ring | None = None) -> TameWord:
    """Word for x_target -> x_target + b M in the free algebra on four generators.

    M is a word (tuple of indices) in x and y. Only linear maps and psi are used.
    """
    ring = ring or Ring(field or QQ, 4, True)
    if ring.n != 4 or not ring.free:
        raise ValueError("build_freeassoc_monomial works in the free algebra on four generators")
    M = tuple(M)
    if not M:
        raise ValueError("empty word is a constant shift")
    height(M)
    if target not in (Z, T):
        raise ValueError("target must be z or t")
    w = _free_monomial(ring, M, ring.field(b))
    if target == T:
        w = relabel(w, [X, Y, T, Z])
    return w


def _swap_xy(M):
    return tuple(Y if a == X else X for a in M)


def _free_monomial(ring: Ring, M, b) -> TameWord:
    """z -> z + b M, by the run-height recursion."""
    if b == 0:
        return TameWord(ring)
    if M == (X, Y):
        return scaled_psi(ring, b)
    if height(M) == 1:
        return pure_power_word(ring, Z, M[0], len(M), b)
    if M[-1] == Y:
        return relabel(_free_monomial(ring, _swap_xy(M), b), [Y, X, Z, T])
    k = _trailing_run(M)
    head = M[:-k]
    if head == (Y,):
        return _free_y_xk(ring, k, b)
    # z -> z + b M' conjugating t -> t + z x^k leaves t -> t + b M' x^k
    inner = _free_monomial(ring, head, b)
    alpha = relabel(_free_y_xk(ring, k, 1), [X, Z, T, Y])
    w = inner.inverse() + alpha + inner + alpha.inverse()
    return relabel(w, [X, Y, T, Z])


def _trailing_run(M) -> int:
    k = 0
    while k < len(M) and M[-1 - k] == M[-1]:
        k += 1
    return k


def _free_y_xk(ring: Ring, k: int, b) -> TameWord:
    """z -> z + b y x^k, via alpha: y -> y + x^k and beta: t -> t + b z y."""
    alpha = pure_power_word(ring, Y, X, k, 1)
    # psi relabelled: x -> z, z -> t gives t -> t + z y
    beta = relabel(scaled_psi(ring, b), [Z, Y, T, X])
    w = beta.conjugate(alpha) + beta.inverse()
    # now t -> t + b z x^k; rename t -> z, z -> y, y -> t
    return relabel(w, [X, T, Y, Z])


def decompose_psi_P(P: Polynomial, target: int | None = None) -> list[Elementary]:
    """One elementary generator per monomial of P (the factors commute)."""
    ring = P.ring
    target = ring.n - 1 if target is None else target
    if P.involves(target):
        raise ValueError(f"P must not involve {ring.names[target]}")
    return [Elementary(target, ring.monomial(m, c)) for m, c in P.sorted_terms()]


def linear_span_rank(monomial_exponents, samples: int, field: Field | None = None, seed: int = 0):
    """Rank of the span of M(A x) over random invertible A, and the full dimension.

    M is the product of x_i^{k_i}; returns (rank, dimension of the degree-k component).
    """
    field = field or QQ
    n = len(monomial_exponents)
    ring = Ring(field, n)
    k = sum(monomial_exponents)
    basis = ring.monomials(k)
    index = {m: i for i, m in enumerate(basis)}
    rng = random.Random(seed)
    rows = []
    while len(rows) < samples:
        A = [[field(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if linalg.det(field, A) == 0:
            continue
        ys = Endo.linear(ring, A).images
        val = ring.one()
        for yi, e in zip(ys, monomial_exponents):
            val = val * yi.pow(e)
        row = [field(0)] * len(basis)
        for m, c in val.terms.items():
            row[index[m]] = c
        rows.append(row)
    return linalg.rank(field, rows), len(basis)
