"""Command-line surface.

Subcommands: parse, expand, eval, verify, propagator, expectation, sample.
Exit codes: 0 on success, 1 on verification failures, 2 on usage or syntax
errors.  JSON output is canonical (sorted keys, no timestamps), so fixed
seed and configuration reproduce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .qarith import QScalar
from .starcalc import Poly, coord_poly_to_json, coord_poly_from_json
from . import dsl
from .verify import run_suite
from .schrodinger import (
    propagator_momentum,
    gaussian_packet,
    heine_phase_report,
)
from .lattice import QLattice, LatticeFn, log_gaussian


def _parse_q(text: str) -> float:
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def _poly_to_text(value) -> str:
    return str(value)


def _poly_json(value):
    if isinstance(value, QScalar):
        return value.to_json()
    if isinstance(value, Poly) and len(value.sectors) == 1:
        return coord_poly_to_json(value)
    # generic multi-sector dump
    return {
        "sectors": [s.kind for s in value.sectors],
        "convention": value.convention,
        "terms": [
            {
                "exps": [list(tr) for tr in triples],
                "t": t,
                "coeff": coeff.to_json(),
            }
            for (triples, t), coeff in sorted(value.terms.items())
        ],
    }


def cmd_parse(args) -> int:
    try:
        node = dsl.parse_expression(args.expr)
    except dsl.SyntaxErr as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    print(dsl.to_sexp(node))
    if dsl.parse_expression(dsl.print_expression(node)) != node:
        print("warning: print/parse round trip failed", file=sys.stderr)
    return 0


def cmd_expand(args) -> int:
    try:
        node = dsl.parse_expression(args.expr)
        value = dsl.evaluate(node)
    except dsl.SyntaxErr as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except dsl.EvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(_poly_json(value), sort_keys=True))
    else:
        print(_poly_to_text(value))
    return 0


def cmd_eval(args) -> int:
    try:
        node = dsl.parse_expression(args.expr)
        value = dsl.evaluate(node)
    except dsl.SyntaxErr as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except dsl.EvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    q0 = _parse_q(args.q)
    if isinstance(value, QScalar):
        v = value.eval(q0)
        print(f"{v.real!r} {v.imag!r}")
        return 0
    rows = []
    for (triples, t), coeff in sorted(value.terms.items()):
        v = coeff.eval(q0)
        rows.append(
            {
                "exps": [list(tr) for tr in triples],
                "t": t,
                "value": [v.real, v.imag],
            }
        )
    print(json.dumps(rows, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    report = run_suite(
        args.suite,
        seed=args.seed,
        q0=_parse_q(args.q),
        N=args.N,
        K=args.K,
        j_min=-args.grid,
        j_max=args.grid,
    )
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    elif args.csv:
        print("suite,case,ok,detail")
        for c in report.cases:
            detail = c.detail.replace(",", ";")
            print(f"{report.suite},{c.name.replace(',', ';')},{int(c.ok)},{detail}")
    else:
        print(report.render())
    return report.exit_code


def cmd_propagator(args) -> int:
    branch = 1 if args.branch == "retarded" else -1
    prop = propagator_momentum(
        args.family, branch, args.order, Fraction(args.mass)
    )
    if args.json:
        print(json.dumps(prop.to_json(), sort_keys=True))
    else:
        for power, poly in sorted(prop.expanded().items(), reverse=True):
            print(f"(E {'+' if branch > 0 else '-'} i eps)^{power} : {poly}")
    return 0


def cmd_expectation(args) -> int:
    with open(args.packet) as fh:
        config = json.load(fh)
    lat_cfg = config["lattice"]
    lat = QLattice(
        float(lat_cfg["q0"]), int(lat_cfg["j_min"]), int(lat_cfg["j_max"])
    )
    pk = config["packet"]
    poly = None
    if pk.get("momentum_poly"):
        poly = coord_poly_from_json(pk["momentum_poly"])
    wp = gaussian_packet(
        lat,
        Fraction(config.get("mass", "1")),
        center_j=float(pk.get("center_j", 0.0)),
        width_j=float(pk.get("width_j", 1.0)),
        odd_fraction=float(pk.get("odd_fraction", 0.0)),
        momentum_poly=poly,
        phase_order=int(config.get("phase_order", 16)),
    )
    t = args.t
    out = {
        "t": t,
        "norm_check": wp.norm_check(t),
        "boundary_mass": wp.boundary_mass(),
    }
    for a in ("+", "3", "-"):
        p = wp.expectation_momentum(a, t)
        x = wp.expectation_position(a, t)
        out[f"P^{a}"] = [p.real, p.imag]
        out[f"X^{a}"] = [x.real, x.imag]
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_heine(args) -> int:
    rows = heine_phase_report(
        args.order,
        _parse_q(args.q),
        args.t,
        args.mass,
        [(0.8, 1.1, 0.9), (1.3, 0.7, 1.1)],
    )
    print(json.dumps(rows, sort_keys=True))
    return 0


def cmd_sample(args) -> int:
    lat = QLattice(_parse_q(args.q), -args.grid, args.grid)
    env = log_gaussian(lat, args.center, args.width)
    fn = LatticeFn.sample(
        lat, "x", lambda a, b, c: env(a) * env(b) * env(c)
    )
    fn.to_csv(args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qeuclid",
        description="Star-product calculus on the q-deformed Euclidean space",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an expression and print its AST")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("expand", help="evaluate an expression symbolically")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("eval", help="evaluate coefficients numerically at q")
    p.add_argument("expr")
    p.add_argument("--q", default="1.1", help="deformation parameter (rational or float)")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", default="all",
                   choices=["qarith", "ncalgebra", "starcalc", "qcalculus",
                            "qexp", "schrodinger", "all"])
    p.add_argument("--q", default="11/10")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--grid", type=int, default=12, help="lattice half-width")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("propagator", help="momentum-space propagator series")
    p.add_argument("--family", default="KR",
                   choices=["KR", "KL", "KRstar", "KLstar"])
    p.add_argument("--branch", default="retarded",
                   choices=["retarded", "advanced"])
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--mass", default="1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_propagator)

    p = sub.add_parser("expectation", help="wave-packet expectation values")
    p.add_argument("--packet", required=True, help="packet JSON file")
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(fn=cmd_expectation)

    p = sub.add_parser("heine", help="per-order phase-factor comparison report")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--q", default="11/10")
    p.add_argument("--t", type=float, default=0.3)
    p.add_argument("--mass", type=float, default=1.0)
    p.set_defaults(fn=cmd_heine)

    p = sub.add_parser("sample", help="sample a Gaussian on the lattice to CSV")
    p.add_argument("--q", default="11/10")
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--width", type=float, default=1.2)
    p.add_argument("--out", default="lattice.csv")
    p.set_defaults(fn=cmd_sample)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
