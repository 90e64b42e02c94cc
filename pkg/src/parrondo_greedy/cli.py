"""Command-line front end.

Exit codes: 0 success, 2 bad flags, 3 nothing detected within the step
budget, 4 a boundary sign could not be decided.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .classifier import (BoundaryRoot, Curve, boundary_root, classify, region12, table2)
from .dynamics import detect
from .errors import (BoundaryAmbiguous, NoSignChange, NotInPartition, ParrondoError,
                     PredicateAmbiguous, Undetected)
from .model import Params, SimplexPoint, stationary_exact
from .numerics import DEFAULT_BITS, PrecisionConfig, format_real, parse_rational, round_decimal
from .oracle import sweep
from .profit import mu_b_forever, mu_for


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bits(text: str) -> int:
    try:
        bits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if bits < 53:
        raise argparse.ArgumentTypeError("--bits must be at least 53")
    return bits


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _digits_for(bits: int) -> int:
    return int(bits * math.log10(2)) + 1


def _dec(value, bits: int) -> str:
    return format_real(value, _digits_for(bits))


def _dec_exact(value: Fraction, places: int = 20) -> str:
    text = round_decimal(value, places)
    return text.rstrip("0").rstrip(".") if "." in text else text


def _params(args) -> Params:
    try:
        return Params(args.rho, args.phi, PrecisionConfig.scaled(args.bits))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _range(text: str) -> List[Fraction]:
    """``a:b:steps`` -> ``steps`` evenly spaced exact values from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:steps, got {text!r}")
    a, b = _rational(parts[0]), _rational(parts[1])
    steps = _positive_int(parts[2])
    if steps == 1:
        return [a]
    return [a + (b - a) * k / (steps - 1) for k in range(steps)]


def _point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected rho,phi, got {text!r}")
    return _rational(parts[0]), _rational(parts[1])


# -- subcommands -------------------------------------------------------------

def cmd_simulate(args, out) -> int:
    params = _params(args)
    try:
        x = SimplexPoint.from_values(args.x0, args.x1, params.bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    status, found, traj = 0, None, None
    try:
        found = detect(x, params, budget=args.steps, keep_trajectory=True)
        traj = found.trajectory
    except Undetected as exc:
        status, traj = 3, exc.trajectory
        print(f"error: {exc}", file=sys.stderr)
    rows = [(t, traj.games[t], traj.states[t]) for t in range(len(traj.games))]
    bits = params.bits
    if args.format == "json":
        doc = {
            "rows": [{"t": t, "game": g, "x0": _dec(s[0], bits), "x1": _dec(s[1], bits),
                      "x2": _dec(s[2], bits)} for t, g, s in rows],
            "behavior": found.describe() if found else "undetected",
            "transient_length": found.transient_length if found else None,
        }
        json.dump(doc, out, indent=1)
        out.write("\n")
        return status
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["t", "game", "x0", "x1", "x2"])
    for t, g, s in rows:
        w.writerow([t, g, _dec(s[0], bits), _dec(s[1], bits), _dec(s[2], bits)])
    out.write("\n")
    if found:
        out.write(f"{found.describe()}\n")
        out.write(f"transient_length={found.transient_length}\n")
    else:
        out.write(f"undetected after {args.steps} steps\n")
    return status


def _classify_fields(params: Params) -> dict:
    c = classify(params)
    fields = {"rho": str(params.rho), "phi": str(params.phi), "regime": c.regime,
              "cycles": [str(p) for p in c.cycles], "band": c.band, "s": c.s,
              "region12": c.region12}
    if c.regime == "GAS-equilibrium":
        fields["pi"] = [str(v) for v in stationary_exact(params.rho)]
    return fields


def cmd_classify(args, out) -> int:
    params = _params(args)
    f = _classify_fields(params)
    if args.format == "json":
        json.dump(f, out, indent=1)
        out.write("\n")
        return 0
    if f["regime"] == "GAS-equilibrium":
        out.write(f"GAS-equilibrium pi=({','.join(f['pi'])})\n")
        return 0
    line = f"cycles {';'.join(f['cycles'])} band={f['band']} s={f['s']}"
    if f["region12"] is not None:
        line += f" region12={f['region12']}"
    out.write(line + "\n")
    return 0


def _root_line(label: str, root: BoundaryRoot, extra: str = "") -> str:
    line = f"{label} {root.truncated()} rounded={root.rounded()}"
    return line + (f" {extra}" if extra else "")


def cmd_boundary(args, out) -> int:
    try:
        curve = Curve.parse(args.curve)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    root = boundary_root(curve, args.rho, args.digits, args.bits)
    out.write(_root_line(curve.label, root) + "\n")
    return 0


def cmd_table2(args, out) -> int:
    for label, root, form in table2(args.digits, args.bits, args.rho):
        out.write(_root_line(label, root, "forms=" + form.replace(", ", ";")) + "\n")
    return 0


def _region_row(job):
    rho, phi, bits = job
    params = Params(rho, phi, PrecisionConfig.scaled(bits))
    try:
        f = _classify_fields(params)
        regime, cycles = f["regime"], ";".join(f["cycles"])
    except ParrondoError as exc:
        regime, cycles = "ambiguous", type(exc).__name__
    region = ""
    if phi > Fraction(2, 3):
        try:
            region = str(region12(params))
        except NotInPartition:
            region = ""
        except PredicateAmbiguous:
            region = "ambiguous"
    return {"rho": _dec_exact(rho), "phi": _dec_exact(phi), "regime": regime,
            "cycles": cycles, "region12": region}


def cmd_regionmap(args, out) -> int:
    for v in args.rho_range:
        if not 0 < v < 1:
            raise UsageError(f"rho values must lie in (0, 1), got {v}")
    for v in args.phi_range:
        if not 0 < v <= 1:
            raise UsageError(f"phi values must lie in (0, 1], got {v}")
    jobs = [(r, p, args.bits) for r in args.rho_range for p in args.phi_range]
    if args.workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_region_row, jobs, chunksize=16))
    else:
        rows = [_region_row(j) for j in jobs]
    if args.format == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return 0
    w = csv.DictWriter(out, fieldnames=["rho", "phi", "regime", "cycles", "region12"],
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return 0


def cmd_profit(args, out) -> int:
    params = _params(args)
    c = classify(params, with_region=False)
    if c.regime == "GAS-equilibrium":
        mu_b_forever(params)
        out.write("mu=0\n")
        return 0
    for pattern in c.cycles:
        out.write(f"mu{pattern}={_dec(mu_for(pattern, params, check=False), params.bits)}\n")
    return 0


def cmd_sweep(args, out) -> int:
    if not args.point:
        raise UsageError("sweep needs at least one --point rho,phi")
    for rho, phi in args.point:
        if not 0 < rho < 1 or not 0 < phi <= 1:
            raise UsageError(f"bad grid point ({rho}, {phi})")
    summary = sweep(args.point, args.starts, args.budget, args.seed, args.workers, args.bits)
    if not args.findings:
        for p in summary["points"]:
            p.pop("findings")
    json.dump(summary, out, indent=1)
    out.write("\n")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo-greedy",
        description="Greedy play of the mean-field Parrondo games at arbitrary precision.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def rho_phi(p, phi=True):
        p.add_argument("--rho", type=_rational, required=True, help="e.g. 1/3 or 0.25")
        if phi:
            p.add_argument("--phi", type=_rational, required=True, help="fraction of players who play")
        p.add_argument("--bits", type=_bits, default=DEFAULT_BITS, help="mantissa bits (default 256)")

    p = sub.add_parser("simulate", help="iterate the greedy map from one state")
    rho_phi(p)
    p.add_argument("--x0", type=_rational, required=True)
    p.add_argument("--x1", type=_rational, required=True)
    p.add_argument("--steps", type=_positive_int, default=10_000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="predicted equilibrium or cycles")
    rho_phi(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("boundary", help="phi root of one boundary curve")
    rho_phi(p, phi=False)
    p.add_argument("--curve", required=True, help="G:n:m, E:n, E:n:m, H:n:m or b:n")
    p.add_argument("--digits", type=int, default=18)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("table2", help="the nine critical phi values between cycle bands")
    p.add_argument("--digits", type=int, default=18)
    p.add_argument("--rho", type=_rational, default=Fraction(1, 3))
    p.add_argument("--bits", type=_bits, default=DEFAULT_BITS)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("regionmap", help="CSV/JSON map of regimes and regions over a grid")
    p.add_argument("--rho-range", type=_range, required=True, help="a:b:steps")
    p.add_argument("--phi-range", type=_range, required=True, help="a:b:steps")
    p.add_argument("--bits", type=_bits, default=DEFAULT_BITS)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_regionmap)

    p = sub.add_parser("profit", help="closed-form average profit per turn")
    rho_phi(p)
    p.set_defaults(func=cmd_profit)

    p = sub.add_parser("sweep", help="random-start simulation vs prediction, as JSON")
    p.add_argument("--point", type=_point, action="append", help="rho,phi (repeatable)")
    p.add_argument("--starts", type=_positive_int, default=100)
    p.add_argument("--budget", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--bits", type=_bits, default=DEFAULT_BITS)
    p.add_argument("--findings", action="store_true", help="include per-start findings per point")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BoundaryAmbiguous, NoSignChange) as exc:
        print(f"error: {exc} (curve {exc.curve})", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
