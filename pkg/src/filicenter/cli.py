"""Command-line front end: ``filicenter <subcommand> [flags]``.

Exit codes: 0 success, 1 a verification came out false, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Callable

from . import __version__
from .charp import (
    CharPError,
    central_check_modp,
    jacobian_modp,
    jacobian_report,
    p_power_in_pcenter,
    reduce_mod_p,
    to_u_variables,
    verify_grid,
)
from .hilbert import (
    delta_partition,
    delta_weight,
    hilbert_rational,
    hilbert_series_terms,
    integral_check,
    recurrence_verify,
    sym_power_components,
)
from .invariants import (
    ResourceGuardError,
    basis_kernel,
    basis_span,
    independence_check,
    minimal_generators,
    rewrite_in_z,
)
from .polycore import PolynomialSyntaxError, format_poly, parse_poly, to_json
from .sl2 import HomogeneousInvariant, down, is_invariant, raise_, weight
from .transvect import CircRangeError, RecipeError, circ, clebsch_gordan, eval_recipe, lower, w_gen, z_gen

SCHEMA = "filicenter/1"
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


class Outcome:
    """What a handler produced: text, a JSON payload, optional LaTeX, and an exit code."""

    def __init__(self, text: str, payload: dict, latex: str | None = None, code: int = 0):
        self.text = text
        self.payload = payload
        self.latex = latex
        self.code = code


def latex_poly(text: str) -> str:
    out = re.sub(r"([a-z])(-?\d+)", r"\1_{\2}", text)
    out = re.sub(r"\^(-?\d+)", r"^{\1}", out)
    return out.replace("*", " ")


def _poly_arg(text: str, p: int | None = None):
    try:
        return parse_poly(text, p=p)
    except PolynomialSyntaxError as exc:
        raise UsageError(f"malformed polynomial: {exc}") from None


def _invariant_arg(args, text: str | None, recipe: str | None) -> HomogeneousInvariant:
    if (text is None) == (recipe is None):
        raise UsageError("give exactly one of --poly or --recipe")
    if recipe is not None:
        return eval_recipe(recipe, args.n)
    return HomogeneousInvariant.certify(_poly_arg(text), args.n)


# ---------------------------------------------------------------- handlers

def cmd_delta(args) -> Outcome:
    fn = delta_partition if args.method == "partition" else delta_weight
    v = fn(args.n, args.d)
    return Outcome(str(v), {"n": args.n, "d": args.d, "delta": v, "method": args.method})


def cmd_delta_table(args) -> Outcome:
    t = hilbert_series_terms(args.n, args.dmax)
    return Outcome(", ".join(map(str, t.values)), {"n": args.n, "delta": list(t.values)})


def cmd_hilbert(args) -> Outcome:
    n = args.n
    if args.terms is not None:
        t = hilbert_series_terms(n, args.terms - 1)
        return Outcome(", ".join(map(str, t.values)), {"n": n, "delta": list(t.values)})
    if args.check_integral is not None:
        try:
            tval = Fraction(args.check_integral)
        except ValueError:
            raise UsageError(f"bad value for t: {args.check_integral!r}") from None
        res = integral_check(n, tval, panels=args.panels)
        ok = res.difference < args.tol
        text = f"numeric {res.numeric:.15g}\nexact {res.exact} ({float(res.exact):.15g})\ndifference {res.difference:.3e}"
        payload = {"n": n, "t": str(tval), "numeric": res.numeric, "exact": str(res.exact),
                   "difference": res.difference, "panels": res.panels, "ok": ok}
        return Outcome(text, payload, code=0 if ok else 1)
    if args.recurrence is not None:
        try:
            coeffs = [int(c) for c in args.recurrence.split(",")]
        except ValueError:
            raise UsageError("--recurrence takes comma-separated integers") from None
        v = recurrence_verify(n, coeffs, args.dmax)
        text = "holds" if v.holds else f"fails at d={v.first_failure}"
        payload = {"n": n, "coefficients": coeffs, "dmax": args.dmax, "holds": v.holds,
                   "first_failure": v.first_failure}
        return Outcome(text, payload, code=0 if v.holds else 1)
    h = hilbert_rational(n, bound=args.bound)
    payload = {"n": n, "pretty": h.pretty(), "numerator": [str(c) for c in h.series.num_coeffs()],
               "denominator": [str(c) for c in h.series.den_coeffs()]}
    return Outcome(h.pretty(), payload, latex=h.latex())


def cmd_zgen(args) -> Outcome:
    z = z_gen(args.i, args.n)
    s = format_poly(z.poly)
    return Outcome(s, {"i": args.i, "n": args.n, "degree": z.degree, "weight": z.weight, "poly": to_json(z.poly)},
                   latex=latex_poly(s))


def cmd_wgen(args) -> Outcome:
    w = w_gen(args.i)
    s = format_poly(w)
    return Outcome(s, {"i": args.i, "poly": to_json(w)}, latex=latex_poly(s))


def cmd_circ(args) -> Outcome:
    if args.recipe is not None:
        if args.left is not None or args.right is not None:
            raise UsageError("--recipe excludes --left/--right")
        z = eval_recipe(args.recipe, args.n)
    else:
        if args.left is None:
            raise UsageError("give --recipe, or --left (with --right and --d, or with --lower)")
        a = HomogeneousInvariant.certify(_poly_arg(args.left), args.n)
        if args.lower is not None:
            s = format_poly(lower(a, args.lower))
            return Outcome(s, {"n": args.n, "k": args.lower, "poly": s}, latex=latex_poly(s))
        if args.right is None or args.d is None:
            raise UsageError("--left needs --right and --d")
        b = HomogeneousInvariant.certify(_poly_arg(args.right), args.n)
        z = circ(a, b, args.d)
    s = format_poly(z.poly)
    return Outcome(s, {"n": args.n, "degree": z.degree, "weight": z.weight, "poly": to_json(z.poly)},
                   latex=latex_poly(s))


def cmd_basis(args) -> Outcome:
    if args.method == "kernel":
        b = basis_kernel(args.n, args.k, p=args.p, max_monomials=args.max_monomials)
    else:
        if args.p is not None:
            raise UsageError("the span method works over Q only")
        b = basis_span(args.n, args.k, max_monomials=args.max_monomials)
    lines = [f"dim Z_{{{args.n},{args.k}}} = {len(b)}"]
    lines += [f"[w={e.weight}] {format_poly(e.poly)}" for e in b.elements]
    payload = {"n": args.n, "k": args.k, "method": b.method, "dimension": len(b), "experimental": b.experimental,
               "elements": [{"weight": e.weight, "poly": format_poly(e.poly)} for e in b.elements]}
    return Outcome("\n".join(lines), payload)


def cmd_mingens(args) -> Outcome:
    res = minimal_generators(args.n, args.maxdeg, modulus=None if args.exact else "auto", seed=args.seed,
                             order=args.order, materialize=args.materialize)
    lines = [f"{r.name}  deg {r.degree}  weight {r.weight}  {r.recipe}" for r in res.records]
    counts = res.counts()
    lines.append("profile " + ", ".join(f"{k}:{v}" for k, v in sorted(counts.items())))
    lines.append(f"total {len(res)}")
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    recs = []
    for r in res.records:
        d = {"name": r.name, "degree": r.degree, "weight": r.weight, "recipe": r.recipe}
        if r.poly is not None:
            d["poly"] = format_poly(r.poly)
        recs.append(d)
    payload = {"n": args.n, "maxdeg": args.maxdeg, "count": len(res),
               "profile": {str(k): v for k, v in sorted(counts.items())}, "generators": recs,
               "modulus": res.modulus, "warnings": res.warnings}
    return Outcome("\n".join(lines), payload)


def cmd_rewrite(args) -> Outcome:
    f = _invariant_arg(args, args.poly, args.recipe)
    e = rewrite_in_z(f, args.n)
    s = e.factored()
    return Outcome(s, {"n": args.n, "expression": str(e), "factored": s}, latex=latex_poly(s))


def cmd_indep(args) -> Outcome:
    if not args.poly:
        raise UsageError("give at least one --poly")
    polys = [_poly_arg(t) for t in args.poly]
    v = independence_check(polys, args.n, seed=args.seed, max_relation_degree=args.max_relation_degree)
    text = "independent" if v.independent else "dependent"
    text += f" ({v.method}, {v.confidence}; rank {v.rank} of {v.size})"
    if v.witness is not None:
        text += f"\nrelation: {v.witness_text()} = 0"
    payload = {"independent": v.independent, "method": v.method, "confidence": v.confidence, "rank": v.rank,
               "size": v.size, "witness": v.witness_text()}
    return Outcome(text, payload)


def cmd_verify(args) -> Outcome:
    f = _poly_arg(args.poly)
    if f.max_index() > args.n:
        raise UsageError(f"polynomial uses y{f.max_index()} beyond n={args.n}")
    ok = is_invariant(f)
    text = "invariant" if ok else f"not invariant: down(f) = {format_poly(down(f))}"
    return Outcome(text, {"n": args.n, "invariant": ok, "down": format_poly(down(f))}, code=0 if ok else 1)


def cmd_poly(args) -> Outcome:
    f = _poly_arg(args.poly, p=args.p)
    if args.op == "down":
        g = down(f)
    elif args.op == "raise":
        if args.n is None:
            raise UsageError("--op raise needs --n")
        g = raise_(f, args.n)
    elif args.op == "weight":
        if args.n is None:
            raise UsageError("--op weight needs --n")
        w = weight(f, args.n)
        return Outcome(str(w), {"weight": w})
    else:
        g = f
    s = format_poly(g)
    return Outcome(s, {"op": args.op, "poly": to_json(g)}, latex=latex_poly(s))


def cmd_cg(args) -> Outcome:
    if args.power is not None:
        comps = sym_power_components(args.m, args.power)
        text = ", ".join(f"U_{w}" + (f"^{c}" if c > 1 else "") for w, c in sorted(comps.items(), reverse=True))
        return Outcome(text, {"n": args.m, "d": args.power, "components": {str(w): c for w, c in comps.items()}})
    if args.n is None:
        raise UsageError("give --n (tensor product) or --power (symmetric power)")
    ws = clebsch_gordan(args.m, args.n)
    return Outcome(" + ".join(f"U_{w}" for w in ws), {"m": args.m, "n": args.n, "highest_weights": ws})


def cmd_charp(args) -> Outcome:
    if args.grid:
        entries = verify_grid(args.max_n, args.max_p, threads=args.threads)
        ok = all(e.ok for e in entries)
        lines = [f"n={e.n} p={e.p} central={e.central} pcenter={e.pcenter} triangular={e.triangular} det={e.det}"
                 + (f" error={e.error}" if e.error else "") for e in entries]
        payload = {"grid": [{"n": e.n, "p": e.p, "central": e.central, "pcenter": e.pcenter,
                             "jacobian_triangular": e.triangular, "det": e.det, "error": e.error} for e in entries],
                   "ok": ok}
        return Outcome("\n".join(lines), payload, code=0 if ok else 1)
    if args.n is None or args.p is None:
        raise UsageError("charp needs --n and --p (or --grid)")
    if args.reduce is not None:
        g = reduce_mod_p(_poly_arg(args.reduce), args.p)
        pc = p_power_in_pcenter(g, args.p, args.n)
        text = format_poly(g)
        payload = {"n": args.n, "p": args.p, "poly": text, "in_pcenter": pc is not None}
        if pc is not None:
            payload["u"] = str(to_u_variables(pc))
            text += f"\nin p-center: {payload['u']}"
        return Outcome(text, payload)
    if args.jacobian:
        res = jacobian_modp(args.n, args.p)
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in res.matrix]
        text = "\n".join(rows) + f"\ntriangular: {res.triangular}\ndet: {res.det_text}"
        payload = jacobian_report(res)
        payload["matrix"] = [[str(e) for e in row] for row in res.matrix]
        return Outcome(text, payload)
    rep = central_check_modp(args.n, args.p)
    lines = [f"z{i + 1}: central={c} leading_ok={lo}" for i, (c, lo) in enumerate(zip(rep.central, rep.leading_ok))]
    payload = {"n": args.n, "p": args.p, "central": list(rep.central), "leading_ok": list(rep.leading_ok)}
    return Outcome("\n".join(lines), payload, code=0 if rep.all_central else 1)


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized steps")
    p.add_argument("--threads", type=int, default=1, help="cap on worker threads for grid checks")
    return p


# subcommand -> (handler, library operations it exposes)
DISPATCH: dict[str, tuple[Callable[..., Outcome], tuple[str, ...]]] = {
    "delta": (cmd_delta, ("delta_partition", "delta_weight")),
    "delta-table": (cmd_delta_table, ("hilbert_series_terms",)),
    "hilbert": (cmd_hilbert, ("hilbert_rational", "integral_check", "recurrence_verify")),
    "zgen": (cmd_zgen, ("z_gen",)),
    "wgen": (cmd_wgen, ("w_gen",)),
    "circ": (cmd_circ, ("circ", "lower", "eval_recipe")),
    "basis": (cmd_basis, ("basis_kernel", "basis_span")),
    "mingens": (cmd_mingens, ("minimal_generators",)),
    "rewrite": (cmd_rewrite, ("rewrite_in_z",)),
    "indep": (cmd_indep, ("independence_check",)),
    "verify": (cmd_verify, ("is_invariant",)),
    "poly": (cmd_poly, ("parse_poly", "down", "raise_", "weight")),
    "cg": (cmd_cg, ("clebsch_gordan", "sym_power_components")),
    "charp": (cmd_charp, ("reduce_mod_p", "central_check_modp", "p_power_in_pcenter", "to_u_variables",
                          "jacobian_modp", "verify_grid")),
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="filicenter", description="Invariants of the down derivation on Q[y0..yn].")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("delta", "dimension of Z_{n,d}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=("partition", "weight"), default="partition")

    s = add("delta-table", "dimensions of Z_{n,0..dmax}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dmax", type=int, required=True)

    s = add("hilbert", "Hilbert series: rational form, terms, recurrence or integral check")
    s.add_argument("--n", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--terms", type=int)
    g.add_argument("--rational", action="store_true")
    g.add_argument("--check-integral", metavar="T")
    g.add_argument("--recurrence", metavar="C1,C2,...")
    s.add_argument("--dmax", type=int, default=40)
    s.add_argument("--panels", type=int, default=1 << 14)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--bound", type=int, default=18)

    s = add("zgen", "the invariant z_i in Q[y0..yn]")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = add("wgen", "the polynomial w_i")
    s.add_argument("--i", type=int, required=True)

    s = add("circ", "transvectant of two invariants, a lowering step, or a recipe")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--left")
    s.add_argument("--right")
    s.add_argument("--d", type=int)
    s.add_argument("--lower", type=int, metavar="K", help="K-th ladder element of --left")
    s.add_argument("--recipe")

    s = add("basis", "basis of Z_{n,k}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=("kernel", "span"), default="kernel")
    s.add_argument("--p", type=int, help="prime field (kernel method, experimental)")
    s.add_argument("--max-monomials", type=int, default=500_000)

    s = add("mingens", "minimal generators of Z_n up to a degree")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--maxdeg", type=int, required=True)
    s.add_argument("--order", choices=("forward", "reverse"), default="forward")
    s.add_argument("--exact", action="store_true", help="row-reduce over Q instead of a random prime field")
    s.add_argument("--materialize", action="store_true", help="also evaluate each recipe over Q")

    s = add("rewrite", "express an invariant through y0^-1 and z1..zn")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--poly")
    s.add_argument("--recipe")

    s = add("indep", "algebraic independence of polynomials")
    s.add_argument("--n", type=int)
    s.add_argument("--poly", action="append", default=[])
    s.add_argument("--max-relation-degree", type=int, default=12)

    s = add("verify", "check that a polynomial is killed by down")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--poly", required=True)

    s = add("poly", "parse and apply down, raise or weight")
    s.add_argument("--poly", required=True)
    s.add_argument("--op", choices=("show", "down", "raise", "weight"), default="show")
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=int)

    s = add("cg", "Clebsch-Gordan and symmetric-power decompositions")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--power", type=int)

    s = add("charp", "prime-characteristic checks")
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--jacobian", action="store_true")
    s.add_argument("--reduce", metavar="POLY")
    s.add_argument("--grid", action="store_true")
    s.add_argument("--max-n", type=int, default=8)
    s.add_argument("--max-p", type=int, default=23)
    return parser


def render(out: Outcome, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, "command": command, **out.payload}, sort_keys=True, indent=2)
    if fmt == "latex":
        return out.latex if out.latex is not None else out.text
    return out.text


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = DISPATCH[args.command][0]
    try:
        out = handler(args)
    except (UsageError, PolynomialSyntaxError, ResourceGuardError, RecipeError, CircRangeError, CharPError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(out, args.format, args.command))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
