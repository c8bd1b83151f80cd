"""Approximation tools: hiking, inclusion-exclusion, tame residuals, greedy approximation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import factorial, gcd

from . import linalg
from .endo import INF, Endo, aug_order, compose_all, compose_mod, jet_inverse
from .field import QQ, Field
from .poly import Polynomial, Ring
from .tame import Elementary, Linear, TameWord, eval_word, word


# hiking

@dataclass(frozen=True)
class HikingPlan:
    """Integers ks (torus parameters) and scalars lambdas (integer exponents in char 0).

    Defining equations: sum(ks) = 1 (mod char) and sum_i lambda_i k_i^n = 0
    for every targeted exponent n.
    """

    ks: tuple[int, ...]
    lambdas: tuple
    exponents: tuple[int, ...]
    field: Field = QQ

    def check(self) -> bool:
        f = self.field
        if not f.is_zero(f(sum(self.ks) - 1)):
            return False
        for n in self.exponents:
            total = sum(f(lam) * f.pow(f(k), n) for k, lam in zip(self.ks, self.lambdas))
            if not f.is_zero(f.reduce(total)):
                return False
        return True

    def component_scale(self, r: int):
        """Coefficient picked up by the z-degree-r piece of the lowest correction."""
        f = self.field
        return f.reduce(sum(f(lam) * f.pow(f(k), r) for k, lam in zip(self.ks, self.lambdas)))


def _integer_exponents(field: Field, lambdas):
    """Lambdas as integers usable for repeated composition."""
    out = []
    for lam in lambdas:
        lam = field(lam)
        if field.char:
            out.append(int(lam))
        else:
            if getattr(lam, "denominator", 1) != 1:
                raise ValueError("exponents must be integers in characteristic 0")
            out.append(int(lam))
    return out


def _primitive_integer(vec):
    """Scale a rational vector to a primitive integer vector."""
    from fractions import Fraction

    vec = [Fraction(v) for v in vec]
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = g or 1
    ints = [v // g for v in ints]
    first = next((v for v in ints if v), 1)
    return [v if first > 0 else -v for v in ints]


def hiking_solve(exponents, field: Field = QQ, strategy: str = "vandermonde") -> HikingPlan:
    """A plan whose lambdas annihilate every listed exponent.

    ``vandermonde``: ks = 2, 3, ..., then one entry making the sum 1; lambdas
    span the null space of the power matrix. ``inclexcl``: torus parameters are
    subset sums of 1..M with signs (-1)^(M-|S|), so every power below M cancels
    and sum(lambdas) = 1.
    """
    exps = tuple(sorted({int(e) for e in exponents}))
    if any(e < 1 for e in exps):
        raise ValueError("exponents must be positive")
    if not exps:
        return HikingPlan((1,), (field(1),), (), field)
    if strategy == "vandermonde":
        plan = _vandermonde_plan(exps, field)
    elif strategy == "inclexcl":
        plan = _inclexcl_plan(exps, field)
    else:
        raise ValueError(f"unknown hiking strategy {strategy!r}")
    if not plan.check():
        raise AssertionError("hiking plan violates its defining equations")
    return plan


def _vandermonde_plan(exps, field: Field) -> HikingPlan:
    m = len(exps)
    if field.char and field.char < m + 2:
        raise ValueError(f"{field.name} has too few residues for {m} exponents")
    ks = _distinct_parameters(m, field)
    rows = [[field.pow(field(k), n) for k in ks] for n in exps]
    null = linalg.nullspace(field, rows, len(ks))
    if not null:
        raise ValueError("power matrix has trivial null space")
    lam = null[0]
    lam = _primitive_integer(lam) if field.char == 0 else [int(v) for v in lam]
    return HikingPlan(tuple(ks), tuple(field(v) for v in lam), exps, field)


def _distinct_parameters(m: int, field: Field) -> list[int]:
    """Smallest m integers >= 2, plus 1 - their sum, all nonzero and distinct in the field."""
    def fine(vals):
        red = [field(v) for v in vals]
        return not any(field.is_zero(v) for v in red) and len(set(red)) == len(red)

    for top in range(m + 1, m + 2 + 4 * max(field.char, 1)):
        for ks in combinations(range(2, top + 1), m):
            vals = list(ks) + [1 - sum(ks)]
            if fine(vals):
                return vals
    raise ValueError(f"no hiking plan found over {field.name}")


def _inclexcl_plan(exps, field: Field) -> HikingPlan:
    M = max(exps) + 1
    if M > 6:
        raise ValueError("inclusion-exclusion plans are limited to exponents below 6")
    ks, lams = [], []
    sign = 1 if M % 2 == 1 else -1
    for size in range(1, M + 1):
        for S in combinations(range(1, M + 1), size):
            t = sum(S)
            if field.is_zero(field(t)):
                raise ValueError(f"subset sum {t} vanishes in {field.name}")
            ks.append(t)
            lams.append(field(sign * (-1) ** (M - size)))
    ks.append(1 - sum(ks))
    lams.append(field(0))
    return HikingPlan(tuple(ks), tuple(lams), exps, field)


def scale_generator(ring: Ring, index: int, c) -> Endo:
    scal = [1] * ring.n
    scal[index] = c
    return Endo.diagonal(ring, scal)


def jet_power(phi: Endo, e: int, N: int) -> Endo:
    """phi composed with itself e times modulo I^N (e may be negative)."""
    if e < 0:
        phi = jet_inverse(phi, N)
        e = -e
    result = Endo.identity(phi.ring)
    base = phi.truncate(N)
    while e:
        if e & 1:
            result = compose_mod(result, base, N)
        e >>= 1
        if e:
            base = compose_mod(base, base, N)
    return result


@dataclass(frozen=True)
class HikingResult:
    endo: Endo
    plan: HikingPlan
    scale_index: int
    order: int
    component_scales: dict = dc_field(default_factory=dict)


def hiking_apply(phi: Endo, plan: HikingPlan, scale_index: int, N: int) -> HikingResult:
    """Product over i of (s_{k_i}^-1 phi s_{k_i})^{lambda_i} modulo I^N.

    s_c scales generator ``scale_index`` by c. In the lowest layer the piece of
    the correction with degree r in that generator is multiplied by
    sum_i lambda_i k_i^r, which vanishes for every targeted exponent.
    """
    if not phi.is_origin_preserving():
        raise ValueError("hiking needs an origin-preserving endomorphism")
    order = aug_order(phi).order
    if order != INF and N <= order:
        raise ValueError(f"jet order {N} cannot see the lowest correction (degree {order})")
    ring = phi.ring
    f = ring.field
    if f != plan.field:
        raise ValueError("plan and endomorphism use different fields")
    factors = []
    for k, e in zip(plan.ks, _integer_exponents(f, plan.lambdas)):
        if e == 0:
            continue
        if f.is_zero(f(k)):
            raise ValueError(f"torus parameter {k} vanishes in {f.name}")
        s = scale_generator(ring, scale_index, f(k))
        s_inv = scale_generator(ring, scale_index, f.inv(f(k)))
        conj = compose_all([s_inv, phi, s], N)
        factors.append(jet_power(conj, e, N))
    result = compose_all(factors, N) if factors else Endo.identity(ring)
    scales = {}
    if order != INF:
        degs = set()
        for p in aug_order(phi).discrepancies:
            degs.update(p.graded_by(scale_index).keys())
        scales = {r: plan.component_scale(r) for r in sorted(degs)}
    return HikingResult(result, plan, scale_index, order, scales)


def graded_layer(phi: Endo, degree: int, scale_index: int):
    """Per image, the degree-``degree`` correction split by degree in ``scale_index``."""
    ring = phi.ring
    out = []
    for p, g in zip(phi.images, ring.gens()):
        out.append((p - g).homogeneous(degree).graded_by(scale_index))
    return out


# inclusion-exclusion

def verify_inclusion_exclusion(n: int, m: int, field: Field = QQ) -> Polynomial:
    """sum over nonempty S of (-1)^(n-|S|) (sum_{i in S} x_i)^m."""
    if not 1 <= n <= 6:
        raise ValueError("n must be between 1 and 6")
    if m < 0:
        raise ValueError("m must be nonnegative")
    ring = Ring(field, n)
    gens = ring.gens()
    acc = ring.zero()
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for S in combinations(range(n), size):
            s = ring.zero()
            for i in S:
                s = s + gens[i]
            acc = acc + s.pow(m).scale(sign)
    return acc


def inclusion_exclusion_expected(n: int, m: int, field: Field = QQ) -> Polynomial:
    ring = Ring(field, n)
    if m < n:
        return ring.zero()
    if m == n:
        return ring.monomial((1,) * n, factorial(n))
    raise ValueError("no closed form for m > n")


# tame residuals

def tame_residual_order(phi: Endo, w: TameWord, bound: int | None = None):
    """Depth of phi composed with the inverse of eval(w) in the augmentation filtration.

    For origin-preserving maps this equals the lowest degree of phi - eval(w).
    With ``bound`` the word is evaluated modulo I^bound and the result is
    capped at ``bound`` (meaning "at least bound").
    """
    if phi.ring != w.ring:
        raise ValueError("endomorphism and word live in different rings")
    if not phi.is_origin_preserving():
        return 0
    W = eval_word(w, bound)
    if not W.is_origin_preserving():
        return 0
    if bound is not None:
        phi = phi.truncate(bound)
    low = INF
    for p, q in zip(phi.images, W.images):
        d = p - q
        if d:
            low = min(low, d.low_degree())
    if bound is not None and low >= bound:
        return bound
    return low


@dataclass(frozen=True)
class PartialResult:
    """Best word found, the order it reaches, and the layer it could not remove."""

    word: TameWord
    order: int
    obstruction: tuple[Polynomial, ...]
    reason: str = ""

    partial = True


def _candidate_linears(ring: Ring, count: int, seed: int):
    """Deterministic invertible matrices with small entries, identity first."""
    f = ring.field
    n = ring.n
    mats = [tuple(tuple(f(int(i == j)) for j in range(n)) for i in range(n))]
    if n < 2:
        return mats
    rng = random.Random(seed)
    # small fields have few such matrices, so stop after a bounded search
    for _ in range(50 * count):
        if len(mats) >= count:
            break
        m = [[f(int(i == j)) for j in range(n)] for i in range(n)]
        a, b = rng.sample(range(n), 2)
        m[a][b] = f(rng.choice([1, -1, 2]))
        for _ in range(rng.randint(0, 2)):
            i, j = rng.sample(range(n), 2)
            m[i][j] = f(rng.randint(-2, 2))
        if linalg.det(f, m) == 0:
            continue
        t = tuple(tuple(r) for r in m)
        if t not in mats:
            mats.append(t)
    return mats


def _layer_vector(layer, index):
    vec = [0] * len(index)
    for i, p in enumerate(layer):
        for m, c in p.terms.items():
            vec[index[(i, m)]] = c
    return vec


def greedy_tame_approximate(phi: Endo, m: int, max_conjugators: int = 40, seed: int = 0):
    """A word w with phi = eval(w) modulo I^m, or a PartialResult.

    Strips the linear part, then removes one homogeneous layer at a time. Each
    layer is written as a combination of layers of elementary maps conjugated
    by linear maps S (the layer of S^-1 E S is (S^-1)_{.i} P(Sx)); the
    coefficients come from an exact linear solve.
    """
    ring = phi.ring
    f = ring.field
    if not phi.is_origin_preserving():
        raise ValueError("approximation needs an origin-preserving endomorphism")
    A = phi.linear_matrix()
    if linalg.det(f, A) == 0:
        raise ValueError("linear part is singular")
    w = word(ring, Linear(A))
    if m <= 2:
        return w
    mats = _candidate_linears(ring, max_conjugators, seed)
    for d in range(2, m):
        W_inv = eval_word(w.inverse(), m)
        rho = compose_mod(W_inv, phi, d + 1)
        layer = [(p - g).homogeneous(d) for p, g in zip(rho.images, ring.gens())]
        low = [(p - g).low_degree() for p, g in zip(rho.images, ring.gens()) if p != g]
        if low and min(low) < d:
            raise AssertionError("approximation lost track of lower layers")
        if not any(layer):
            continue
        step = _solve_layer(ring, d, layer, mats)
        if step is None:
            return PartialResult(w, d, tuple(layer), f"layer of degree {d} is outside the span of conjugated elementary layers")
        w = w + step
    return w


def _solve_layer(ring: Ring, d: int, layer, mats):
    f = ring.field
    basis = ring.monomials(d)
    index = {(i, mon): k for k, (i, mon) in enumerate((i, mon) for i in range(ring.n) for mon in basis)}
    target = _layer_vector(layer, index)
    columns = []
    labels = []
    for S in mats:
        Sinv = linalg.inverse(f, S)
        S_images = Endo.linear(ring, S).images
        for i in range(ring.n):
            for mon in basis:
                if ring.monomial(mon).involves(i):
                    continue
                P = ring.monomial(mon).substitute(S_images)
                vec_layer = [P.scale(Sinv[j][i]) for j in range(ring.n)]
                columns.append(_layer_vector(vec_layer, index))
                labels.append((S, i, mon))
        rows = [list(r) for r in zip(*columns)]
        sol = linalg.solve(f, rows, target)
        if sol is not None:
            return _assemble(ring, labels, sol)
    return None


def _assemble(ring: Ring, labels, sol) -> TameWord:
    groups: dict = {}
    order = []
    for (S, i, mon), c in zip(labels, sol):
        if c == 0:
            continue
        if S not in groups:
            groups[S] = {}
            order.append(S)
        acc = groups[S].get(i, ring.zero())
        groups[S][i] = acc + ring.monomial(mon, c)
    out = TameWord(ring)
    for S in order:
        inner = word(ring, *[Elementary(i, P) for i, P in sorted(groups[S].items()) if P])
        conj = word(ring, Linear(S))
        is_identity = all(S[a][b] == (1 if a == b else 0) for a in range(ring.n) for b in range(ring.n))
        out = out + (inner if is_identity else inner.conjugate(conj))
    return out
