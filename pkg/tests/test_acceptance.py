"""Acceptance suite: one check per criterion, each printing a single pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tamejet.approx import (PartialResult, greedy_tame_approximate, hiking_apply, hiking_solve,
                            tame_residual_order, verify_inclusion_exclusion)
from tamejet.endo import (Endo, abelianize_endo, aug_order, compose, compose_all, compose_mod,
                          is_homothety_mod, jacobian_det, jet_inverse, nagata, nagata_inverse, product)
from tamejet.field import QQ, Field
from tamejet.fileio import format_endo, format_word, parse_endo, parse_word
from tamejet.poly import Ring
from tamejet.samples import random_endo, random_poly, random_word
from tamejet.star import StarProduct, associator, bracket
from tamejet.tame import (build_alpha_m, build_alpha_P, build_freeassoc_monomial, build_monomial_xkyl,
                          build_phi_m, eval_word)
from tamejet.torus import (TorusElement, WeightAction, centralizer_support, conjugate_by_torus,
                           is_singular, normalization_targets, solve_torus_normalization, torus_conjugate)
from tamejet.verify import CURVE_FIXTURES, commutator_witness_word, hiking_fixture, verify_suite_section5

from test_fileio import CORPUS

F2, F5, F7 = Field(2), Field(5), Field(7)


def elementary(ring, i, poly):
    return Endo.elementary(ring, i, poly)


def c1_commutator_witnesses():
    count = skipped = 0
    for field in (QQ, F5):
        ring = Ring(field, 3)
        for k, m in itertools.product(range(2, 6), repeat=2):
            if field.char and k % field.char == 0 and m % field.char == 0:
                skipped += 1
                continue
            phi = product(*commutator_witness_word(k, m, ring), N=m + k)
            if aug_order(phi).order != m + k - 1:
                return False, f"k={k} m={m} over {field.name}: order {aug_order(phi).order}"
            count += 1
    return True, f"{count} witnesses exact, {skipped} excluded by the characteristic proviso"


def c2_commutator_depth():
    ring = Ring(QQ, 3)
    rng = random.Random(101)
    count = 0
    for m, k in itertools.product(range(2, 5), repeat=2):
        N = m + k
        for _ in range(20):
            f = Endo(ring, tuple(g + random_poly(ring, rng, m, m + 1, 3) for g in ring.gens()))
            g = Endo(ring, tuple(x + random_poly(ring, rng, k, k + 1, 3) for x in ring.gens()))
            c = compose_all([jet_inverse(f, N), jet_inverse(g, N), f, g], N)
            if aug_order(c).order < m + k - 1:
                return False, f"m={m} k={k}: order {aug_order(c).order}"
            count += 1
    return True, f"{count} commutators"


def c3_generation():
    n = 0
    for field in (QQ, F5, F7):
        ring = Ring(field, 3)
        for m in range(1, 7):
            for b in (1, 2, -1, 3, -2):
                if field.is_zero(field(b)):
                    continue
                assert eval_word(build_phi_m(m, b, ring=ring)) == elementary(ring, 2, ring.gen(0).pow(m).scale(field(b)))
                n += 1
        for k, l in itertools.product(range(7), repeat=2):
            if 0 < k + l <= 6:
                w = build_monomial_xkyl(k, l, 2, ring=ring)
                if eval_word(w) != elementary(ring, 2, ring.monomial((k, l, 0), 2)):
                    return False, f"x^{k}y^{l} over {field.name}"
                n += 1
    R3 = Ring(QQ, 3)
    rng = random.Random(33)
    for _ in range(10):
        P = random_poly(R3, rng, 1, 5, 4, avoid=2)
        if eval_word(build_alpha_P(P)) != elementary(R3, 2, P):
            return False, f"alpha_P for {P}"
        n += 1
    for m in range(1, 6):
        if eval_word(build_alpha_m(m, 3)) != elementary(R3, 2, R3.monomial((m, 1, 0), 3)):
            return False, f"alpha_m m={m}"
        n += 1
    R4 = Ring(QQ, 4, True)
    for L in range(1, 6):
        for M in itertools.product((0, 1), repeat=L):
            if eval_word(build_freeassoc_monomial(M, ring=R4)) != elementary(R4, 2, R4.monomial(M)):
                return False, f"free word {M}"
            n += 1
    return True, f"{n} builder outputs exact"


def c4_inclusion_exclusion():
    for n in range(1, 6):
        ring = Ring(QQ, n)
        for m in range(1, n + 1):
            got = verify_inclusion_exclusion(n, m)
            want = ring.monomial((1,) * n, factorial(n)) if m == n else ring.zero()
            if got != want:
                return False, f"n={n} m={m}: {got}"
    return True, "all 1 <= m <= n <= 5"


def c5_hiking():
    rng = random.Random(55)
    for _ in range(20):
        exps = sorted(rng.sample(range(1, 6), rng.randint(1, 3)))
        plan = hiking_solve(exps)
        if sum(plan.ks) != 1:
            return False, f"sum(ks) != 1 for {exps}"
        for e in exps:
            if sum(Fraction(lam) * k ** e for k, lam in zip(plan.ks, plan.lambdas)) != 0:
                return False, f"moment {e} nonzero for {exps}"
    for i in range(10):
        ring = Ring(QQ, 3, i % 2 == 1)
        N = 2 + i % 5
        targets = sorted(rng.sample(range(1, N + 1), min(2, N)))
        phi = hiking_fixture(ring, N, sorted(set([0] + targets)), rng)
        plan = hiking_solve(targets)
        J = min(N + 2, 8)
        res = hiking_apply(phi, plan, 2, J)
        after = (res.endo.images[1] - ring.gen(1)).homogeneous(N).graded_by(2)
        before = (phi.images[1] - ring.gen(1)).homogeneous(N).graded_by(2)
        if any(r in after for r in targets) or after.get(0) != before[0].scale(plan.component_scale(0)):
            return False, f"case {i}: targets {targets} survive"
    return True, "20 plans, 10 annihilations"


def c6_star_suite():
    rng = random.Random(66)
    for field in (QQ, F5):
        ring = Ring(field, 3, True)
        for _ in range(50):
            f, g, h = (random_poly(ring, rng, 1, 3, 3) for _ in range(3))
            a, b = field(rng.randint(-3, 3)), field(rng.randint(-3, 3))
            if associator(f, g, h, StarProduct(a, b)) != bracket(g, bracket(f, h)).scale(a * b):
                return False, f"associator over {field.name}"
        x, y, z = ring.gens()
        for a, b in itertools.product(range(-2, 3), repeat=2):
            if associator(x, y, z, StarProduct(field(a), field(b))).is_zero() != field.is_zero(field(a * b)):
                return False, f"associativity iff ab=0 at a={a} b={b}"
    for jet in (4, 5):
        r = verify_suite_section5(jet, QQ)
        if not r.ok:
            return False, f"section 5 at jet {jet}: " + ",".join(c.id for c in r.checks if c.status == "fail")
    (c,) = verify_suite_section5(4, F2).by_id("s5.star-combination.char2")
    if c.status != "pass" or "characteristic 2" not in c.detail:
        return False, "characteristic-2 degeneration not recorded"
    return True, "associator 100 triples, suite (i)-(vi) at jets 4 and 5, char-2 recorded"


def c7_jet_inverse():
    rng = random.Random(77)
    for field in (QQ,):
        ring = Ring(field, 3)
        for i in range(20):
            phi = eval_word(random_word(ring, rng, 1 + i % 6, 3), 8)
            if not compose_mod(phi, jet_inverse(phi, 8), 8).is_identity():
                return False, f"word {i}"
    if jet_inverse(nagata(), 8) != nagata_inverse().truncate(8):
        return False, "Nagata inverse"
    return True, "20 words and Nagata at N=8"


def c8_nagata():
    R = Ring(QQ, 3)
    N = nagata()
    want = Endo.from_strings(R, ["x - 2*y*(x*z + y^2) - z*(x*z + y^2)^2", "y + z*(x*z + y^2)", "z"])
    omega = R.parse("y^2 + x*z")
    ok = (N == want
          and omega.substitute(N.images) == omega
          and compose(N, nagata_inverse()).is_identity()
          and compose(nagata_inverse(), N).is_identity()
          and aug_order(N).order == 3
          and jacobian_det(N) == R.one())
    return ok, "images, invariant, inverse, order 3, det 1"


def c9_curve_criterion():
    ring = Ring(QQ, 3)
    grid = list(itertools.product(range(1, 7), repeat=3))
    for N, fixtures in CURVE_FIXTURES.items():
        for idx, texts in enumerate(fixtures):
            phi = Endo.from_strings(ring, [t.replace("c*", "3*") for t in texts])
            member = is_homothety_mod(phi, N)
            singular = [k for k in grid if max(k) <= N * min(k) and is_singular(phi, k)]
            if member != (idx < 3) or bool(singular) == member:
                return False, f"N={N} fixture {idx}: member={member} witnesses={len(singular)}"
    return True, "18 fixtures across N=2,3,4"


def c10_torus():
    rng = random.Random(1010)
    for i in range(30):
        ring = Ring(QQ, 3, i % 2 == 1)
        phi = random_endo(ring, rng)
        a = TorusElement(tuple(Fraction(rng.choice([-3, -1, 2, 5]), rng.choice([1, 2, 3])) for _ in range(3)))
        b = TorusElement(tuple(Fraction(rng.choice([-2, 1, 3, 4]), rng.choice([1, 5])) for _ in range(3)))
        if torus_conjugate(a, phi, b) != compose(compose(a.endo(ring), phi), b.endo(ring)):
            return False, f"torus conjugate {i}"
    mon = lambda n, *idx: tuple(sum(1 for i in idx if i == j) for j in range(n))
    for n in (3, 4, 5):
        std = centralizer_support(WeightAction.standard(n), 0, 3)
        mixed = centralizer_support(WeightAction(((1, 1), (1, 0), (0, 1)) + ((1, 0),) * (n - 3)), 0, 2)
        square = centralizer_support(WeightAction(((2,),) + ((1,),) * (n - 1)), 0, 2)
        if std != [mon(n, 0)]:
            return False, f"standard n={n}"
        if set(mixed) != {mon(n, 0), mon(n, 1, 2)} | {mon(n, i, 2) for i in range(3, n)}:
            return False, f"mixed n={n}"
        if set(square) != {mon(n, 0)} | {mon(n, i, j) for i in range(1, n) for j in range(i, n)}:
            return False, f"square n={n}"
    solved = 0
    for _ in range(20):
        n = rng.randint(3, 6)
        alpha = [rng.randint(-2, 3) for _ in range(n)]
        exps = tuple(alpha[(i + 1) % n] + alpha[(i + 2) % n] - alpha[i] for i in range(n))
        res = solve_torus_normalization(exps, 2)
        if not res.solvable:
            continue
        ring = Ring(QQ, n)
        t = TorusElement(res.scalars(QQ))
        betas = [Fraction(2) ** e for e in exps]
        for i, psi in enumerate(normalization_targets(ring, betas)):
            s = t.scalars
            if betas[i] * s[i] / (s[(i + 1) % n] * s[(i + 2) % n]) != 1:
                return False, f"cyclic product {i} for {exps}"
            if conjugate_by_torus(t, psi).images[i] != ring.gen(i) + ring.gen((i + 1) % n) * ring.gen((i + 2) % n):
                return False, f"normalized image {i} for {exps}"
        solved += 1
    return solved > 0, f"30 conjugations, 9 supports, {solved} normalizations"


def c11_abelianization_and_io():
    rng = random.Random(1111)
    ring = Ring(QQ, 3, True)
    for i in range(20):
        p, q = eval_word(random_word(ring, rng, 2, 2)), eval_word(random_word(ring, rng, 2, 2))
        if abelianize_endo(compose(p, q)) != compose(abelianize_endo(p), abelianize_endo(q)):
            return False, f"pair {i}"
    for kind, obj in CORPUS:
        if kind == "endo":
            text = format_endo(obj)
            ok = parse_endo(text) == obj and format_endo(parse_endo(text)) == text
        elif kind == "word":
            text = format_word(obj)
            ok = parse_word(text) == obj and format_word(parse_word(text)) == text
        else:
            text = str(obj)
            ok = obj.ring.parse(text) == obj and str(obj.ring.parse(text)) == text
        if not ok:
            return False, f"round trip {kind}: {text!r}"
    return True, f"20 pairs, {len(CORPUS)} corpus items"


def c12_approximator():
    ring = Ring(QQ, 3)
    rng = random.Random(1212)
    worst = 99
    for i in range(20):
        phi = eval_word(random_word(ring, rng, 3, 4), 7)
        w = greedy_tame_approximate(phi, 6)
        if isinstance(w, PartialResult):
            return False, f"composite {i} partial at order {w.order}"
        order = tame_residual_order(phi, w, 6)
        if order < 6:
            return False, f"composite {i} reaches only {order}"
        worst = min(worst, order)
    w = greedy_tame_approximate(nagata(), 4)
    if isinstance(w, PartialResult) or tame_residual_order(nagata(), w, 4) < 4:
        return False, "Nagata below order 4"
    bad = Endo.from_strings(ring, ["x + x^2", "y", "z"])
    res = greedy_tame_approximate(bad, 4)
    if not (isinstance(res, PartialResult) and res.partial
            and tame_residual_order(bad, res.word, 4) == res.order < 4):
        return False, "non-invertible input not flagged"
    res2 = greedy_tame_approximate(nagata(F2), 5)
    if isinstance(res2, PartialResult) and tame_residual_order(nagata(F2), res2.word, 5) != res2.order:
        return False, "F2 partial result misreports its order"
    return True, "20 composites >= 6, Nagata >= 4, partials flagged"


CRITERIA = [
    (1, "commutator witnesses", 10, c1_commutator_witnesses),
    (2, "commutator depth", 10, c2_commutator_depth),
    (3, "constructive generation", 60, c3_generation),
    (4, "inclusion-exclusion", 5, c4_inclusion_exclusion),
    (5, "hiking", 30, c5_hiking),
    (6, "star suite", 60, c6_star_suite),
    (7, "jet inversion", 30, c7_jet_inverse),
    (8, "Nagata fixture", 5, c8_nagata),
    (9, "curve criterion", 30, c9_curve_criterion),
    (10, "torus", 10, c10_torus),
    (11, "abelianization and round trip", 10, c11_abelianization_and_io),
    (12, "approximator contract", 120, c12_approximator),
]


def run(number, title, budget, fn):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        ok, detail = False, f"{detail}; over budget {budget}s"
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.1f}s): {detail}")
    return ok, detail


@pytest.mark.parametrize("number,title,budget,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, budget, fn):
    ok, detail = run(number, title, budget, fn)
    assert ok, detail


if __name__ == "__main__":
    results = [run(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
