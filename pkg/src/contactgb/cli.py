"""Command-line interface.

Subcommands cover the whole pipeline: `identities` and `ideal` print
generators, `groebner` the reduced basis, `approx` the extracted branch
and critical bound, `sweep` a density curve, `simulate` Monte Carlo
estimates and `compare` the approximation against a simulation.  Exit
status: 0 success, 2 usage error, 3 degenerate system (trivial solution
only), 4 numerical failure.

Machine-readable outputs (JSON, CSV) carry a manifest with the command
line, tool version, RNG name and seed; they validate against
``schemas/cli-output.schema.json`` shipped inside the package.
"""

from __future__ import annotations

import argparse
import datetime
import json
import logging
import math
import sys
from fractions import Fraction

from . import __version__
from .closures import build_custom_ideal, build_ideal, custom_scheme, normalize_order_label
from .groebner import buchberger
from .identities import ConfigurationPattern, VariableRegistry, correlation_identity, identity_system
from .polyring import format_polynomial
from .simulator import (
    RNG_NAME,
    SimConfig,
    density_estimate,
    duality_check,
    extinction_probability,
)
from .solver import (
    AmbiguousRootError,
    ApproximationResult,
    DegenerateSystemError,
    NoPhysicalRootError,
    RATE,
    SITE,
    SolverError,
    _site_coefficient_polys,
    approximate,
    branch_value,
    density,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERICAL = 4


def _manifest(args, seed: int | None = None) -> dict:
    return {
        "tool": "contactgb",
        "version": __version__,
        "command": args.command,
        "argv": list(args._argv),
        "rng": RNG_NAME if seed is not None else None,
        "seed": seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _emit_json(payload: dict):
    print(json.dumps(payload, indent=2))


def _fmt(poly, registry: VariableRegistry):
    return format_polynomial(poly, registry.lex_order(), registry.name_of)


def _exact_str(value) -> str | None:
    return str(value) if isinstance(value, (int, Fraction)) else None


def _float12(value) -> str:
    return f"{float(value):.12g}"


def _surd_expression(result: ApproximationResult) -> str | None:
    """Best-effort exact expression for the critical bound.

    Deflates rational roots from the crossing polynomial; if what remains
    is quadratic and contains the largest root, renders it as a surd.
    """
    q = result.nontrivial.substitute({SITE: 1})
    coeffs = q.univariate(RATE)
    if len(coeffs) - 1 <= 1:
        return _exact_str(result.lambda_c)
    target = float(result.lambda_c)
    # clear rational roots: candidates p/q with p | constant, q | leading
    work = list(coeffs)
    while work and not work[0]:
        work = work[1:]
    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0] or [1]
    changed = True
    while changed and len(work) > 3:
        changed = False
        lead, const = work[-1], work[0]
        for p in divisors(const.numerator * const.denominator or 1):
            for s in divisors(lead.numerator * lead.denominator or 1):
                for sign in (1, -1):
                    cand = Fraction(sign * p, s)
                    total = Fraction(0)
                    for c in reversed(work):
                        total = total * cand + c
                    if total == 0:
                        if abs(float(cand) - target) < 1e-9:
                            return str(cand)
                        out, acc = [], Fraction(0)
                        for c in reversed(work):
                            acc = acc * cand + c
                            out.append(acc)
                        work = out[::-1][1:]
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    if len(work) != 3:
        return None
    denominators = math.lcm(*(c.denominator for c in work))
    numerators = math.gcd(*(abs(c.numerator * denominators // c.denominator) for c in work))
    work = [c * denominators / numerators for c in work]
    c0, c1, c2 = work
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return None
    for sign, tag in ((1, "+"), (-1, "-")):
        val = (-float(c1) + sign * float(disc) ** 0.5) / (2 * float(c2))
        if abs(val - target) < 1e-9:
            return f"({-c1} {tag} sqrt({disc})) / {2 * c2}"
    return None


def _closed_form(result: ApproximationResult, registry: VariableRegistry) -> str | None:
    """Closed-form branch text for degree <= 2 branch polynomials."""
    deg = result.nontrivial.degree(SITE)
    polys = _site_coefficient_polys(result.nontrivial)
    if deg == 1:
        c, b = polys
        return f"x(l) = ({_fmt(-1 * c, registry)}) / ({_fmt(b, registry)})"
    if deg == 2 and result.discriminant is not None:
        c, b, a = polys
        disc_text = _fmt(result.discriminant, registry)
        even = all(v.denominator == 1 and v.numerator % 2 == 0 for v in b.terms.values())
        numer = -1 * b * (Fraction(1, 2) if even else 1)
        denom = a * (1 if even else 2)
        test = max(2.0 * float(result.lambda_c), float(result.lambda_c) + 1.0)
        want = branch_value(result.nontrivial, test)
        lam_val = Fraction(test)
        nv = float(numer.evaluate({RATE: lam_val}))
        dv = float(denom.evaluate({RATE: lam_val}))
        root_d = float(result.discriminant.evaluate({RATE: lam_val})) ** 0.5
        sign = "+" if abs((nv + root_d) / dv - want) <= abs((nv - root_d) / dv - want) else "-"
        return (
            f"x(l) = (({_fmt(numer, registry)}) {sign} sqrt(D)) / ({_fmt(denom, registry)})"
            f"   with D = {disc_text}"
        )
    return None


# ---------------------------------------------------------------------------
# subcommands


def _cmd_identities(args) -> int:
    registry = VariableRegistry()
    if args.pattern:
        patterns = [ConfigurationPattern.from_string(p) for p in args.pattern]
        polys = [correlation_identity(p, registry) for p in patterns]
    else:
        polys = identity_system(args.order, registry)
    lines = [_fmt(p, registry) for p in polys]
    if args.out == "json":
        _emit_json({"manifest": _manifest(args), "identities": lines})
    else:
        print("\n".join(lines))
    return EXIT_OK


def _generators(args, registry: VariableRegistry):
    if args.scheme == "custom":
        if not args.relation:
            raise ValueError("custom scheme needs at least one --relation")
        scheme = custom_scheme(args.relation)
        return build_custom_ideal(args.pattern or [], scheme, registry)
    return build_ideal(args.order, registry)


def _cmd_ideal(args) -> int:
    registry = VariableRegistry()
    gens = _generators(args, registry)
    lines = [_fmt(p, registry) for p in gens]
    if args.out == "json":
        _emit_json({"manifest": _manifest(args), "generators": lines})
    else:
        print("\n".join(lines))
    return EXIT_OK


def _cmd_groebner(args) -> int:
    if args.trace:
        logging.basicConfig(level=logging.DEBUG, format="%(message)s")
    registry = VariableRegistry()
    gens = _generators(args, registry)
    basis = buchberger(gens, registry.lex_order(), trace=args.trace)
    lines = [_fmt(p, registry) for p in basis]
    if args.out == "json":
        _emit_json({"manifest": _manifest(args), "basis": lines})
    else:
        print("\n".join(lines))
    return EXIT_OK


def _cmd_approx(args) -> int:
    registry = VariableRegistry()
    try:
        result = approximate(args.order, registry)
    except DegenerateSystemError as err:
        lines = [_fmt(p, registry) for p in err.basis] if err.basis else []
        if args.out == "json":
            _emit_json(
                {
                    "manifest": _manifest(args),
                    "order": normalize_order_label(args.order),
                    "degenerate": True,
                    "basis": lines,
                }
            )
        else:
            print(f"order {args.order}: trivial solution only")
            for line in lines:
                print(f"  {line}")
        return EXIT_DEGENERATE
    lam_c = result.lambda_c
    closed = _closed_form(result, registry)
    if args.out == "json":
        _emit_json(
            {
                "manifest": _manifest(args),
                "order": result.order_label,
                "degenerate": False,
                "basis": [_fmt(p, registry) for p in result.basis],
                "elimination": _fmt(result.elim, registry),
                "nontrivial": _fmt(result.nontrivial, registry),
                "lambda_c": {
                    "exact": _surd_expression(result),
                    "value": float(lam_c),
                    "text": _float12(lam_c),
                },
                "branch": closed,
                "discriminant": _fmt(result.discriminant, registry)
                if result.discriminant is not None
                else None,
            }
        )
    else:
        print(f"order {result.order_label}")
        print("basis:")
        for p in result.basis:
            print(f"  {_fmt(p, registry)}")
        print(f"elimination: {_fmt(result.elim, registry)}")
        print(f"nontrivial factor: {_fmt(result.nontrivial, registry)}")
        exact = _surd_expression(result)
        suffix = f"  (= {exact})" if exact else ""
        print(f"lambda_c = {_float12(lam_c)}{suffix}")
        if closed:
            print(closed)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    result = approximate(args.order)
    if args.step <= 0:
        raise ValueError("--step must be positive")
    count = int((args.stop - args.start) / args.step + 1e-9) + 1
    rows = []
    for i in range(max(count, 0)):
        lam = args.start + i * args.step
        rows.append((lam, density(result, lam)))
    manifest = _manifest(args)
    if args.out == "json":
        _emit_json(
            {
                "manifest": manifest,
                "order": result.order_label,
                "rows": [{"lambda": l, "rho": r} for l, r in rows],
            }
        )
    else:
        print(f"# {json.dumps(manifest)}")
        print("lambda,rho")
        for l, r in rows:
            print(f"{l:.10g},{r:.10g}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    params = {
        "lambda": args.lam,
        "pattern": args.pattern,
        "L": args.L,
        "T": args.T,
        "replicas": args.replicas,
        "seed": args.seed,
        "mode": args.mode,
    }
    if args.mode == "extinction":
        cfg = SimConfig(args.lam, args.L, args.T, args.replicas, args.seed, args.pattern)
        est = extinction_probability(cfg)
        payload = {"mean": est.mean, "half_width": est.half_width, "elapsed": est.elapsed}
    elif args.mode == "density":
        cfg = SimConfig(args.lam, args.L, args.T, args.replicas, args.seed, "ones")
        est = density_estimate(cfg)
        payload = {"mean": est.mean, "half_width": est.half_width, "elapsed": est.elapsed}
    else:
        lhs, rhs = duality_check(args.lam, args.pattern, args.L, args.T, args.replicas, args.seed)
        payload = {
            "vacancy": {"mean": lhs.mean, "half_width": lhs.half_width},
            "extinction": {"mean": rhs.mean, "half_width": rhs.half_width},
            "difference": abs(lhs.mean - rhs.mean),
            "elapsed": lhs.elapsed + rhs.elapsed,
        }
    _emit_json(
        {
            "manifest": _manifest(args, seed=args.seed),
            "mode": args.mode,
            "params": params,
            "rng": RNG_NAME,
            **payload,
        }
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    result = approximate(args.order)
    rho_approx = density(result, args.lam)
    # branch_value is only meaningful at rates >= the critical bound; below
    # it the approximate extinction probability is 1
    if args.lam < float(result.lambda_c):
        ext_approx = 1.0
    else:
        try:
            ext_approx = branch_value(result.nontrivial, args.lam)
        except NoPhysicalRootError:
            ext_approx = 1.0
    dens = density_estimate(SimConfig(args.lam, args.L, args.T, args.replicas, args.seed, "ones"))
    ext = extinction_probability(
        SimConfig(args.lam, args.L, args.T, args.replicas, args.seed, args.pattern),
        key_offset=args.replicas,
    )
    _emit_json(
        {
            "manifest": _manifest(args, seed=args.seed),
            "order": result.order_label,
            "lambda": args.lam,
            "rho_approx": rho_approx,
            "rho_sim": dens.mean,
            "ci": {"rho_sim": dens.half_width, "extinction_sim": ext.half_width},
            "extinction_approx": ext_approx,
            "extinction_sim": ext.mean,
            "rng": RNG_NAME,
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_out(p: argparse.ArgumentParser, default="text", choices=("text", "json")):
    p.add_argument("--out", default=default, choices=choices, help="output format")


def _add_order(p: argparse.ArgumentParser, required=True):
    p.add_argument(
        "--order", required=required, choices=["1", "2", "2prime", "3"],
        help="approximation order",
    )


def _add_sim_params(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="infection rate")
    p.add_argument("--pattern", default="o", help="initial pattern string")
    p.add_argument("--L", type=int, default=400, help="lattice size")
    p.add_argument("--T", type=float, default=200.0, help="time horizon")
    p.add_argument("--replicas", type=int, default=2000, help="independent replicas")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactgb",
        description="Groebner-basis approximations and simulation of the 1d contact process",
    )
    parser.add_argument("--version", action="version", version=f"contactgb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="print correlation identities")
    p.add_argument("--pattern", action="append", help="pattern string, repeatable")
    p.add_argument("--order", type=int, choices=[1, 2, 3], help="identity system order")
    _add_out(p)
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("ideal", help="print ideal generators")
    _add_order(p, required=False)
    p.add_argument("--scheme", choices=["custom"], help="use a custom closure scheme")
    p.add_argument("--relation", action="append", help="closure relation like o*ooxo=oo*oxo")
    p.add_argument("--pattern", action="append", help="identity pattern for custom ideals")
    _add_out(p)
    p.set_defaults(func=_cmd_ideal)

    p = sub.add_parser("groebner", help="print the reduced basis")
    _add_order(p, required=False)
    p.add_argument("--scheme", choices=["custom"])
    p.add_argument("--relation", action="append")
    p.add_argument("--pattern", action="append")
    p.add_argument("--trace", action="store_true", help="log pair processing")
    _add_out(p)
    p.set_defaults(func=_cmd_groebner)

    p = sub.add_parser("approx", help="extract branch, density and critical bound")
    _add_order(p)
    _add_out(p)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("sweep", help="emit a density curve")
    _add_order(p)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, default=0.05)
    _add_out(p, default="csv", choices=("csv", "json"))
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo estimates")
    _add_sim_params(p)
    p.add_argument(
        "--mode", default="extinction", choices=["extinction", "density", "duality"]
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="approximation vs simulation at one rate")
    _add_order(p)
    _add_sim_params(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    args._argv = argv
    try:
        return args.func(args)
    except (ValueError,) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateSystemError as err:
        print(f"degenerate system: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (SolverError, ArithmeticError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
