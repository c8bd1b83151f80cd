"""Algebra endomorphisms given by generator images, and jet operations on them.

Composition convention: ``compose(phi, psi)`` applies ``phi`` first and then
``psi``; concretely its i-th image is ``phi.images[i]`` with every generator
replaced by the corresponding image of ``psi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import reduce as _fold

from . import linalg
from .poly import Polynomial, Ring

INF = math.inf


@dataclass(frozen=True)
class Endo:
    ring: Ring
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.ring.n:
            raise ValueError(f"expected {self.ring.n} images, got {len(imgs)}")
        for p in imgs:
            if p.ring != self.ring:
                raise ValueError(f"image ring {p.ring} does not match {self.ring}")

    # construction

    @classmethod
    def identity(cls, ring: Ring) -> "Endo":
        return cls(ring, ring.gens())

    @classmethod
    def from_strings(cls, ring: Ring, texts) -> "Endo":
        return cls(ring, tuple(ring.parse(t) for t in texts))

    @classmethod
    def linear(cls, ring: Ring, matrix) -> "Endo":
        """x_i -> sum_j matrix[i][j] x_j."""
        gens = ring.gens()
        imgs = []
        for row in matrix:
            acc = ring.zero()
            for c, g in zip(row, gens):
                acc = acc + g.scale(c)
            imgs.append(acc)
        return cls(ring, tuple(imgs))

    @classmethod
    def elementary(cls, ring: Ring, i: int, poly: Polynomial) -> "Endo":
        """x_i -> x_i + poly, every other generator fixed."""
        imgs = list(ring.gens())
        imgs[i] = imgs[i] + poly
        return cls(ring, tuple(imgs))

    @classmethod
    def diagonal(cls, ring: Ring, scalars) -> "Endo":
        return cls(ring, tuple(g.scale(s) for g, s in zip(ring.gens(), scalars)))

    # queries

    @property
    def n(self) -> int:
        return self.ring.n

    def is_origin_preserving(self) -> bool:
        return all(p.constant_term() == 0 for p in self.images)

    def is_identity(self) -> bool:
        return self.images == self.ring.gens()

    def linear_matrix(self):
        """Degree-1 coefficient matrix A with A[i][j] = coefficient of x_j in image i."""
        return [[p.coeff(self.ring.gen_monomial(j)) for j in range(self.n)] for p in self.images]

    def degree(self) -> int:
        return max(p.degree() for p in self.images)

    def truncate(self, N: int) -> "Endo":
        return Endo(self.ring, tuple(p.truncate(N) for p in self.images))

    def __str__(self):
        names = self.ring.names
        return "\n".join(f"{names[i]} -> {p}" for i, p in enumerate(self.images))

    def __call__(self, p: Polynomial) -> Polynomial:
        """Apply the algebra map to ``p``."""
        return p.substitute(self.images)


def _check(phi: Endo, psi: Endo):
    if phi.ring != psi.ring:
        raise ValueError(f"ring mismatch: {phi.ring} vs {psi.ring}")


def compose(phi: Endo, psi: Endo) -> Endo:
    """``phi`` then ``psi``: image i is phi.images[i] with x_j replaced by psi.images[j]."""
    _check(phi, psi)
    return Endo(phi.ring, tuple(p.substitute(psi.images) for p in phi.images))


def compose_mod(phi: Endo, psi: Endo, N: int) -> Endo:
    """``compose(phi, psi)`` with every image truncated below degree N."""
    if N < 1:
        raise ValueError("jet order must be >= 1")
    _check(phi, psi)
    if psi.is_origin_preserving():
        phi = phi.truncate(N)
    return Endo(phi.ring, tuple(p.substitute(psi.images, N) for p in phi.images))


def compose_all(endos, N: int | None = None) -> Endo:
    """Left-to-right composition of a nonempty sequence."""
    endos = list(endos)
    if N is None:
        return _fold(compose, endos)
    return _fold(lambda a, b: compose_mod(a, b, N), endos)


def product(*endos: Endo, N: int | None = None) -> Endo:
    """Composition of algebra homomorphisms written right to left.

    ``product(a, b)`` maps p to a(b(p)), i.e. ``compose(b, a)``.
    """
    return compose_all(reversed(endos), N)


def jet_inverse(phi: Endo, N: int) -> Endo:
    """Formal inverse modulo I^N, correcting one degree at a time."""
    if N < 1:
        raise ValueError("jet order must be >= 1")
    if not phi.is_origin_preserving():
        raise ValueError("jet_inverse needs an origin-preserving endomorphism")
    field = phi.ring.field
    A = phi.linear_matrix()
    try:
        B = linalg.inverse(field, A)
    except ValueError:
        raise ValueError("linear part is singular") from None
    ring = phi.ring
    psi = Endo.linear(ring, B).truncate(N)
    ident = ring.gens()
    for d in range(2, N):
        cur = compose_mod(phi, psi, d + 1)
        D = [(p - g).homogeneous(d) for p, g in zip(cur.images, ident)]
        if not any(D):
            continue
        new = []
        for i, p in enumerate(psi.images):
            corr = ring.zero()
            for j in range(ring.n):
                if B[i][j] and D[j]:
                    corr = corr + D[j].scale(B[i][j])
            new.append(p - corr)
        psi = Endo(ring, tuple(new))
    return psi


def commutator(phi: Endo, psi: Endo, N: int) -> Endo:
    """``phi^-1 psi^-1 phi psi`` in compose order, modulo I^N."""
    return compose_all([jet_inverse(phi, N), jet_inverse(psi, N), phi, psi], N)


@dataclass(frozen=True)
class JetReport:
    """Depth in the augmentation filtration plus the lowest discrepancies."""

    order: int | float
    discrepancies: tuple[Polynomial, ...] = dc_field(default=())

    def in_H(self, N: int) -> bool:
        return self.order >= N

    def __str__(self):
        return "inf" if self.order == INF else str(self.order)


def aug_order(phi: Endo) -> JetReport:
    """Largest N with phi(x_i) = x_i mod I^N for all i (0 off the origin, inf for id)."""
    ring = phi.ring
    diffs = [p - g for p, g in zip(phi.images, ring.gens())]
    if not phi.is_origin_preserving():
        return JetReport(0, tuple(d.homogeneous(0) for d in diffs))
    lows = [d.low_degree() for d in diffs if d]
    if not lows:
        return JetReport(INF, tuple(ring.zero() for _ in diffs))
    order = min(lows)
    return JetReport(order, tuple(d.homogeneous(order) for d in diffs))


def is_homothety_mod(phi: Endo, N: int) -> bool:
    """True iff phi(x_i) = lambda x_i mod I^N for one nonzero lambda shared by all i."""
    if N < 2:
        raise ValueError("N must be >= 2")
    ring = phi.ring
    lam = phi.images[0].coeff(ring.gen_monomial(0))
    if lam == 0:
        return False
    return all(p.truncate(N) == g.scale(lam) for p, g in zip(phi.images, ring.gens()))


def preserves_ideal_power(phi: Endo, N: int) -> bool:
    """True iff phi maps every degree-N monomial into I^N."""
    if N <= 0 or phi.is_origin_preserving():
        return True
    ring = phi.ring
    for mon in ring.monomials(N):
        img = ring.monomial(mon).substitute(phi.images)
        if img and img.low_degree() < N:
            return False
    return True


def jacobian(phi: Endo):
    if phi.ring.free:
        raise ValueError("the Jacobian is only defined for commutative endomorphisms")
    return [[p.derivative(j) for j in range(phi.n)] for p in phi.images]


def determinant(matrix, ring: Ring) -> Polynomial:
    """Cofactor expansion along rows, memoized on the remaining column set."""
    n = len(matrix)
    memo: dict = {}

    def minor(row: int, cols: tuple[int, ...]) -> Polynomial:
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def jacobian_det(phi: Endo) -> Polynomial:
    return determinant(jacobian(phi), phi.ring)


def abelianize_endo(phi: Endo) -> Endo:
    if not phi.ring.free:
        raise ValueError("abelianize_endo expects a free-variant endomorphism")
    ring = phi.ring.with_variant(False)
    return Endo(ring, tuple(p.abelianize() for p in phi.images))


def nagata(field=None) -> Endo:
    """(x - 2y w - w^2 z, y + w z, z) with w = y^2 + xz."""
    from .field import QQ

    ring = Ring(field or QQ, 3)
    return Endo.from_strings(ring, ["x - 2*y*(y^2+x*z) - (y^2+x*z)^2*z", "y + (y^2+x*z)*z", "z"])


def nagata_inverse(field=None) -> Endo:
    """Closed-form inverse: (x + 2y w - w^2 z, y - w z, z)."""
    from .field import QQ

    ring = Ring(field or QQ, 3)
    return Endo.from_strings(ring, ["x + 2*y*(y^2+x*z) - (y^2+x*z)^2*z", "y - (y^2+x*z)*z", "z"])
