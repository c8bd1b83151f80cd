"""Command-line interface: ``tamejet <subcommand> ...``.

Exit codes: 0 success, 1 verification failure or partial result, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .approx import (PartialResult, greedy_tame_approximate, hiking_apply, hiking_solve,
                     inclusion_exclusion_expected, tame_residual_order, verify_inclusion_exclusion)
from .endo import (Endo, abelianize_endo, aug_order, compose, compose_all, jacobian, jacobian_det,
                   jet_inverse, nagata, nagata_inverse, product)
from .expr import ParseError, format_monomial, parse_polynomial, parse_scalar
from .field import Field
from .fileio import format_endo, format_word, parse_endo, parse_word
from .poly import Ring
from .star import StarProduct, associator, associator_closed_form, mirror, star
from .tame import (ROUTES, build_alpha_m, build_alpha_P, build_freeassoc_monomial,
                   build_monomial_xkyl, build_phi_m, eval_word)
from .torus import (TorusElement, WeightAction, centralizer_support, conjugate_by_torus,
                    normalization_targets, singular_witnesses, solve_torus_normalization)
from .verify import verify_paper

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _endo(path: str) -> Endo:
    return parse_endo(_read(path))


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _field(args) -> Field:
    return Field.parse(args.field)


def _poly(text: str, ring: Ring):
    return parse_polynomial(text, ring)


def _same_ring(*endos: Endo):
    for e in endos[1:]:
        if e.ring != endos[0].ring:
            raise UsageError(f"ring mismatch: {endos[0].ring} vs {e.ring}")


def _order_text(order) -> str:
    return "inf" if order == float("inf") else str(order)


# subcommands

def cmd_compose(args, out):
    endos = [_endo(p) for p in args.files]
    _same_ring(*endos)
    if args.order == "product":
        result = product(*endos, N=args.jet)
    else:
        result = compose_all(endos, args.jet)
    out.write(format_endo(result))
    return EXIT_OK


def cmd_jet(args, out):
    out.write(format_endo(_endo(args.file).truncate(args.jet)))
    return EXIT_OK


def cmd_inverse(args, out):
    out.write(format_endo(jet_inverse(_endo(args.file), args.jet)))
    return EXIT_OK


def cmd_ord(args, out):
    phi = _endo(args.file)
    rep = aug_order(phi)
    out.write(f"ord={_order_text(rep.order)}\n")
    names = phi.ring.names
    for i, p in enumerate(rep.discrepancies):
        if p:
            out.write(f"{names[i]}: {p}\n")
    return EXIT_OK


def cmd_jacobian(args, out):
    phi = _endo(args.file)
    if args.matrix:
        for row in jacobian(phi):
            out.write("[" + ", ".join(str(p) for p in row) + "]\n")
    out.write(f"det = {jacobian_det(phi)}\n")
    return EXIT_OK


def cmd_abelianize(args, out):
    out.write(format_endo(abelianize_endo(_endo(args.file))))
    return EXIT_OK


def cmd_eval_word(args, out):
    w = parse_word(_read(args.file))
    out.write(format_endo(eval_word(w, args.jet)))
    return EXIT_OK


def _b(args, field: Field):
    return parse_scalar(args.b, field)


def cmd_build(args, out):
    field = _field(args)
    kind = args.kind
    if kind == "phi_m":
        w = build_phi_m(args.m, _b(args, field), field)
    elif kind == "monomial":
        w = build_monomial_xkyl(args.k, args.l, _b(args, field), field, route=args.route)
    elif kind == "alpha_m":
        w = build_alpha_m(args.m, _b(args, field), field)
    elif kind == "alpha_P":
        ring = Ring(field, 3)
        w = build_alpha_P(_poly(args.poly, ring))
    else:
        ring = Ring(field, 4, True)
        M = _poly(args.word, ring)
        if len(M) != 1:
            raise UsageError("--word must be a single monomial in x and y")
        (mon, c), = M.terms.items()
        w = build_freeassoc_monomial(mon, field.reduce(c * _b(args, field)), 2 if args.target == "z" else 3, ring=ring)
    out.write(format_word(w))
    return EXIT_OK


def _action(args) -> WeightAction:
    """Weights as '[[2],[1],[1]]' (optionally prefixed by 'weights=') or '2;1;1'."""
    if not args.weights:
        return WeightAction.standard(args.n)
    text = args.weights.strip()
    if text.startswith("weights="):
        text = text[len("weights="):]
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad weights {text!r}: {exc.msg}") from None
    else:
        rows = [_int_list(r) for r in text.split(";")]
    if not rows or not all(isinstance(r, list) and all(isinstance(a, int) for a in r) for r in rows):
        raise UsageError("weights must be a list of integer vectors")
    return WeightAction(tuple(tuple(r) for r in rows))


def cmd_centralizer(args, out):
    action = _action(args)
    n = len(action.weights)
    ring = Ring(_field(args), n, args.variant == "free")
    if not 1 <= args.index <= n:
        raise UsageError(f"--index must be in 1..{n}")
    support = centralizer_support(action, args.index - 1, args.degree, ring)
    out.write(f"# centralizer support of {ring.names[args.index - 1]} up to degree {args.degree}\n")
    for mon in support:
        out.write((format_monomial(mon, ring) or "1") + "\n")
    return EXIT_OK


def cmd_singular_curve(args, out):
    phi = _endo(args.file)
    wit = singular_witnesses(phi, args.N, args.kmax)
    out.write(f"# weight vectors k in {{1..{args.kmax}}}^{phi.n} of order <= {args.N} with a singular curve\n")
    out.write(f"count={len(wit)}\n")
    for k in wit:
        out.write(",".join(map(str, k)) + "\n")
    return EXIT_OK


def cmd_normalize_torus(args, out):
    exps = _int_list(args.exponents)
    res = solve_torus_normalization(exps, args.base)
    if not res.solvable:
        out.write(f"unsolvable: {res.reason}\n")
        return EXIT_OK
    out.write("alpha = " + ", ".join(f"{args.base}^{a}" for a in res.exponents) + "\n")
    field = _field(args)
    ring = Ring(field, len(exps))
    alpha = TorusElement(res.scalars(field))
    betas = [field.pow(field(args.base), e) for e in exps]
    ok = True
    for i, psi in enumerate(normalization_targets(ring, betas)):
        image = conjugate_by_torus(alpha, psi).images[i]
        out.write(f"{ring.names[i]} -> {image}\n")
        ok = ok and image == ring.gen(i) + ring.gen((i + 1) % ring.n) * ring.gen((i + 2) % ring.n)
    out.write(f"check {'pass' if ok else 'fail'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_hike(args, out):
    field = _field(args)
    plan = hiking_solve(_int_list(args.exponents), field, args.strategy)
    out.write("# tamejet hiking plan v1\n")
    out.write(f"field={field.name} strategy={args.strategy} exponents={','.join(map(str, plan.exponents))}\n")
    out.write(f"ks={','.join(map(str, plan.ks))}\n")
    out.write(f"lambdas={','.join(field.format(v) for v in plan.lambdas)}\n")
    out.write(f"check {'pass' if plan.check() else 'fail'}\n")
    if not plan.check():
        return EXIT_FAIL
    if args.target:
        phi = _endo(args.target)
        if phi.ring.field != field:
            raise UsageError("target field differs from --field")
        res = hiking_apply(phi, plan, args.scale_index - 1, args.jet)
        out.write(f"order={_order_text(res.order)}\n")
        for r, c in res.component_scales.items():
            out.write(f"scale[{r}]={field.format(c)}\n")
        out.write(format_endo(res.endo))
    return EXIT_OK


def cmd_inclexcl(args, out):
    field = _field(args)
    got = verify_inclusion_exclusion(args.n, args.m, field)
    out.write(f"difference = {got}\n")
    if args.m > args.n:
        out.write("expected: no closed form\n")
        return EXIT_OK
    expected = inclusion_exclusion_expected(args.n, args.m, field)
    ok = got == expected
    out.write(f"expected = {expected}\ncheck {'pass' if ok else 'fail'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_approximate(args, out):
    phi = _endo(args.target)
    res = greedy_tame_approximate(phi, args.order, args.conjugators, args.seed)
    partial = isinstance(res, PartialResult)
    w = res.word if partial else res
    achieved = tame_residual_order(phi, w, args.order)
    text = format_word(w)
    report = [f"# tamejet approximation report v1", f"letters={len(w)}",
              f"target_order={args.order}", f"residual_order>={_order_text(achieved)}",
              f"status={'partial' if partial else 'complete'}"]
    if partial:
        report.append(f"reason={res.reason}")
        for name, p in zip(phi.ring.names, res.obstruction):
            if p:
                report.append(f"obstruction {name}: {p}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.write("\n".join(report) + "\n")
    else:
        out.write(text)
        sys.stderr.write("\n".join(report) + "\n")
    return EXIT_FAIL if partial or achieved < args.order else EXIT_OK


def cmd_nagata(args, out):
    field = _field(args)
    N = nagata(field)
    out.write(format_endo(N))
    if not args.check:
        return EXIT_OK
    Ni = nagata_inverse(field)
    ring = N.ring
    ident = Endo.identity(ring)
    omega = ring.parse("y^2 + x*z")
    order = aug_order(N).order
    det = jacobian_det(N)
    checks = [
        ("inverse-left", compose(N, Ni) == ident),
        ("inverse-right", compose(Ni, N) == ident),
        ("invariant", N(omega) == omega),
        ("jacobian", det == ring.one()),
    ]
    out.write("# inverse\n")
    out.write(str(Ni) + "\n")
    out.write(f"ord={_order_text(order)}\ndet={det}\n")
    for name, ok in checks:
        out.write(f"{name} {'pass' if ok else 'fail'}\n")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_FAIL


def cmd_mirror(args, out):
    out.write(format_endo(mirror(_endo(args.file))))
    return EXIT_OK


def cmd_star(args, out):
    field = _field(args)
    ring = Ring(field, args.n, True)
    s = StarProduct(parse_scalar(args.a, field), parse_scalar(args.b, field))
    polys = [_poly(t, ring) for t in args.polys]
    if len(polys) == 2:
        out.write(f"{star(polys[0], polys[1], s)}\n")
        return EXIT_OK
    if len(polys) != 3:
        raise UsageError("star takes two polynomials (product) or three (associator)")
    got = associator(*polys, s)
    closed = associator_closed_form(*polys, s)
    out.write(f"associator = {got}\nclosed form = {closed}\n")
    ok = got == closed
    out.write(f"check {'pass' if ok else 'fail'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_paper(args, out):
    report = verify_paper(args.section, _field(args), args.jet)
    out.write(report.text())
    return EXIT_OK if report.ok else EXIT_FAIL


# parser

def _jet_arg(p, required=False, default=None):
    p.add_argument("--jet", type=int, required=required, default=default, metavar="N",
                   help="work modulo I^N (degree >= N dropped)")


def _field_arg(p):
    p.add_argument("--field", default="Q", help="Q or Fp for a prime p (default Q)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tamejet", description="Exact jets, tame words and verification for polynomial automorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", help="compose endo files (left applied first)")
    p.add_argument("files", nargs="+")
    p.add_argument("--order", choices=["compose", "product"], default="compose",
                   help="compose: first file applied first; product: algebra-homomorphism order")
    _jet_arg(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("jet", help="truncate an endo modulo I^N")
    p.add_argument("file")
    _jet_arg(p, required=True)
    p.set_defaults(func=cmd_jet)

    p = sub.add_parser("inverse", help="jet inverse modulo I^N")
    p.add_argument("file")
    _jet_arg(p, required=True)
    p.set_defaults(func=cmd_inverse)

    for name, func, help_text in [("ord", cmd_ord, "augmentation order and lowest discrepancy"),
                                  ("abelianize", cmd_abelianize, "image of a free endo in the commutative ring"),
                                  ("mirror", cmd_mirror, "conjugate a free endo by word reversal")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.set_defaults(func=func)

    p = sub.add_parser("jacobian", help="Jacobian determinant of a commutative endo")
    p.add_argument("file")
    p.add_argument("--matrix", action="store_true", help="also print the Jacobian matrix")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("eval-word", help="evaluate a word file to an endo file")
    p.add_argument("file", nargs="?", default="-")
    _jet_arg(p)
    p.set_defaults(func=cmd_eval_word)

    p = sub.add_parser("build", help="emit a word realizing an elementary map")
    p.add_argument("kind", choices=["phi_m", "monomial", "alpha_P", "alpha_m", "freeassoc"])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--b", default="1", help="scalar coefficient, e.g. -3/2")
    p.add_argument("--poly", default="x*y", help="polynomial in x, y for alpha_P")
    p.add_argument("--word", default="x*y", help="free monomial in x, y for freeassoc")
    p.add_argument("--target", choices=["z", "t"], default="z", help="target generator for freeassoc")
    p.add_argument("--route", choices=list(ROUTES), help="force a monomial route")
    _field_arg(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("centralizer", help="monomials of the weight of x_i")
    p.add_argument("--weights", help="weight vectors, e.g. '[[1,1],[1,0],[0,1]]' or '1,1;1,0;0,1'")
    p.add_argument("--n", type=int, default=3, help="number of generators for the standard action")
    p.add_argument("--index", type=int, default=1, help="1-based generator index")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--variant", choices=["comm", "free"], default="comm")
    _field_arg(p)
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("singular-curve", help="weight vectors whose curve is singular")
    p.add_argument("file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.set_defaults(func=cmd_singular_curve)

    p = sub.add_parser("normalize-torus", help="solve the cyclic torus normalization")
    p.add_argument("--exponents", required=True, help="beta_i = base^e_i, comma separated")
    p.add_argument("--base", type=int, default=2)
    _field_arg(p)
    p.set_defaults(func=cmd_normalize_torus)

    p = sub.add_parser("hike", help="hiking plan, optionally applied to an endo")
    p.add_argument("--exponents", required=True, help="targeted z-degrees, comma separated")
    p.add_argument("--strategy", choices=["vandermonde", "inclexcl"], default="vandermonde")
    p.add_argument("--target", help="endo file to apply the plan to")
    p.add_argument("--scale-index", type=int, default=3, help="1-based generator scaled by the torus")
    _jet_arg(p, default=8)
    _field_arg(p)
    p.set_defaults(func=cmd_hike)

    p = sub.add_parser("inclexcl", help="inclusion-exclusion power identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _field_arg(p)
    p.set_defaults(func=cmd_inclexcl)

    p = sub.add_parser("approximate", help="greedy tame approximation to a given order")
    p.add_argument("--target", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--conjugators", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the word file here and the report to stdout")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("nagata", help="the Nagata automorphism")
    p.add_argument("--check", action="store_true", help="verify inverse, invariant, order and determinant")
    _field_arg(p)
    p.set_defaults(func=cmd_nagata)

    p = sub.add_parser("star", help="star product a*fg + b*gf, or the associator of three polynomials")
    p.add_argument("polys", nargs="+")
    p.add_argument("--a", default="1")
    p.add_argument("--b", default="0")
    p.add_argument("--n", type=int, default=3)
    _field_arg(p)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("verify-paper", help="run the batch verification suite")
    p.add_argument("--section", choices=["3", "4", "5", "all"], default="all")
    _jet_arg(p, default=4)
    _field_arg(p)
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except ParseError as exc:
        sys.stderr.write(f"tamejet: parse error: {exc}\n")
    except (UsageError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"tamejet: error: {exc}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
