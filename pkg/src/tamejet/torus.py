"""Diagonal torus actions: conjugation, centralizer supports, normalization, curve weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian

from . import linalg
from .endo import Endo, compose
from .field import QQ
from .poly import Polynomial, Ring


@dataclass(frozen=True)
class TorusElement:
    """The diagonal map x_i -> scalars[i] x_i."""

    scalars: tuple

    def __post_init__(self):
        object.__setattr__(self, "scalars", tuple(self.scalars))
        if any(s == 0 for s in self.scalars):
            raise ValueError("torus entries must be nonzero")

    def inverse(self, field) -> "TorusElement":
        return TorusElement(tuple(field.inv(s) for s in self.scalars))

    def endo(self, ring: Ring) -> Endo:
        return Endo.diagonal(ring, self.scalars)

    def monomial_value(self, mon, ring: Ring):
        """beta^J for a monomial J."""
        f = ring.field
        v = f(1)
        if ring.free:
            for i in mon:
                v = f.reduce(v * self.scalars[i])
        else:
            for s, e in zip(self.scalars, mon):
                if e:
                    v = f.reduce(v * f.pow(s, e))
        return v


@dataclass(frozen=True)
class WeightAction:
    """A rank-r torus acting on x_i with integer weight vector weights[i]."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        w = tuple(tuple(int(a) for a in v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len({len(v) for v in w}) > 1:
            raise ValueError("all weight vectors must have the same rank")

    @classmethod
    def standard(cls, n: int) -> "WeightAction":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def weight(self, mon, free: bool):
        total = [0] * self.rank
        idx = mon if free else [i for i, e in enumerate(mon) for _ in range(e)]
        for i in idx:
            for r, a in enumerate(self.weights[i]):
                total[r] += a
        return tuple(total)


def torus_conjugate(alpha: TorusElement, phi: Endo, beta: TorusElement) -> Endo:
    """alpha, then phi, then beta: coefficient of x^J in image i gets alpha_i * beta^J."""
    ring = phi.ring
    f = ring.field
    imgs = []
    for i, p in enumerate(phi.images):
        a = alpha.scalars[i]
        terms = {m: f.reduce(c * a * beta.monomial_value(m, ring)) for m, c in p.terms.items()}
        imgs.append(Polynomial(ring, terms))
    return Endo(ring, tuple(imgs))


def conjugate_by_torus(alpha: TorusElement, phi: Endo) -> Endo:
    """torus_conjugate(alpha, phi, alpha^-1): coefficient of x^J in image i gets alpha_i alpha^-J."""
    f = phi.ring.field
    return torus_conjugate(alpha, phi, alpha.inverse(f))


def centralizer_support(action: WeightAction, i: int, D: int, ring: Ring | None = None):
    """Monomials of degree <= D whose weight equals the weight of x_i."""
    if D < 1:
        raise ValueError("D must be >= 1")
    n = len(action.weights)
    ring = ring or Ring(QQ, n)
    target = tuple(action.weights[i])
    out = []
    for d in range(D + 1):
        for mon in ring.monomials(d):
            if action.weight(mon, ring.free) == target:
                out.append(mon)
    return out


def commutes_with(phi: Endo, action) -> bool:
    """Exact commutation test against a torus element or a weight action."""
    if isinstance(action, TorusElement):
        d = action.endo(phi.ring)
        return compose(d, phi) == compose(phi, d)
    free = phi.ring.free
    for i, p in enumerate(phi.images):
        target = tuple(action.weights[i])
        if any(action.weight(m, free) != target for m in p.terms):
            return False
    return True


@dataclass(frozen=True)
class Normalization:
    """Exponents a_i with alpha_i = base^a_i, or a reason the lattice system has no solution."""

    base: object
    exponents: tuple[int, ...] | None
    reason: str = ""

    @property
    def solvable(self) -> bool:
        return self.exponents is not None

    def scalars(self, field):
        return tuple(field.pow(field(self.base), a) for a in self.exponents)


def normalization_matrix(n: int):
    """Rows of the cyclic system a_{i+1} + a_{i+2} - a_i = e_i."""
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] -= 1
        row[(i + 1) % n] += 1
        row[(i + 2) % n] += 1
        rows.append(row)
    return rows


def solve_torus_normalization(beta_exponents, base=2) -> Normalization:
    """Exponents a with beta_i alpha_{i+1}^-1 alpha_{i+2}^-1 alpha_i = 1 where beta_i = base^e_i.

    Works on the exponent lattice: a rational solve followed by an integrality
    check (the cyclic matrix is nonsingular for the sizes used here).
    """
    e = [int(x) for x in beta_exponents]
    n = len(e)
    if n < 3:
        raise ValueError("need n >= 3")
    rows = normalization_matrix(n)
    sol = linalg.solve(QQ, rows, e)
    if sol is None:
        return Normalization(base, None, "exponent system is inconsistent")
    if linalg.rank(QQ, rows) < n:
        return Normalization(base, None, "exponent system is singular; integer lattice search not attempted")
    sol = [Fraction(s) for s in sol]
    if any(s.denominator != 1 for s in sol):
        shown = ", ".join(str(s) for s in sol)
        return Normalization(base, None, f"no integer solution (rational solution {shown})")
    return Normalization(base, tuple(int(s) for s in sol))


def normalization_targets(ring: Ring, betas):
    """psi_i: x_i -> x_i + beta_i x_{i+1} x_{i+2} for each i (cyclic)."""
    n = ring.n
    out = []
    for i, b in enumerate(betas):
        p = ring.gen((i + 1) % n) * ring.gen((i + 2) % n)
        out.append(Endo.elementary(ring, i, p.scale(b)))
    return out


# curve weights

@dataclass(frozen=True)
class WeightVector:
    ks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if any(k < 1 for k in self.ks):
            raise ValueError("curve weights must be positive")

    @property
    def order(self) -> Fraction:
        return Fraction(max(self.ks), min(self.ks))


def curve_min_exponent(phi: Endo, k) -> int:
    """min over images i and monomials J of k.J - k_i."""
    if not phi.is_origin_preserving():
        raise ValueError("curve analysis needs an origin-preserving endomorphism")
    ks = k.ks if isinstance(k, WeightVector) else tuple(k)
    best = None
    free = phi.ring.free
    for i, p in enumerate(phi.images):
        for mon in p.terms:
            if free:
                val = sum(ks[j] for j in mon)
            else:
                val = sum(ks[j] * e for j, e in enumerate(mon))
            val -= ks[i]
            if best is None or val < best:
                best = val
    return 0 if best is None else best


def is_singular(phi: Endo, k) -> bool:
    return curve_min_exponent(phi, k) < 0


def singular_witnesses(phi: Endo, N: int, kmax: int = 6):
    """All weight vectors in {1..kmax}^n with order <= N whose curve is singular."""
    out = []
    for ks in cartesian(range(1, kmax + 1), repeat=phi.n):
        if Fraction(max(ks), min(ks)) <= N and is_singular(phi, ks):
            out.append(ks)
    return out
