"""Command-line interface: ``cospow <command> ... --out FORMAT[:PATH]``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .approximants import approximations
from .bounds import (
    central_moment_bruteforce,
    exp_pi_sq_over_2_bound,
    moment_closed_form,
    truncated_limsup_series,
)
from .curve import eval_curve, fit_gaussian, make_progression, r_squared
from .errors import CospowError, DomainError
from .io import OutputSpec, Table, emit
from .precision import seq_value
from .scanner import DEFAULT_GAP, ScanConfig, classify_persistence, detect_peaks, scan_range

EXIT_OK = 0
EXIT_USAGE = 2


def _out_spec(default: str):
    def parse(text: str) -> OutputSpec:
        try:
            return OutputSpec.parse(text)
        except DomainError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return {"type": parse, "default": OutputSpec.parse(default), "metavar": "FORMAT[:PATH]"}


def _moment_arg(text: str) -> tuple[int, int]:
    try:
        m, order = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,order, got {text!r}") from None
    return m, order


def _progression_args(sp):
    sp.add_argument("--p", type=int, required=True, help="common difference")
    sp.add_argument("--d", type=int, default=0, help="offset")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--count", type=int, required=True, help="number of terms K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cospow", description="Numerics for |cos n|^(n^gamma).")
    parser.add_argument("--digits", type=int, default=None, help="significant digits for numeric output")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("scan", help="evaluate a_n over an index range")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--start", type=int, required=True)
    sp.add_argument("--end", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=None, help="keep only values above this threshold")
    sp.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes")
    sp.add_argument("--chunk", type=int, default=4096)
    sp.add_argument("--prec-bits", type=int, default=None, metavar="P", help="minimum precision in bits")
    sp.add_argument("--out", **_out_spec("csv:-"))

    sp = sub.add_parser("convergents", help="continued-fraction approximants of pi")
    sp.add_argument("--max-q", type=int, required=True)
    sp.add_argument("--semiconvergents", action="store_true")
    sp.add_argument("--out", **_out_spec("csv:-"))

    sp = sub.add_parser("peaks", help="group above-threshold indices into progressions")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--start", type=int, required=True)
    sp.add_argument("--end", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--gap", type=int, default=DEFAULT_GAP)
    sp.add_argument("--parallel", type=int, default=1, metavar="N")
    sp.add_argument("--out", **_out_spec("json:-"))

    sp = sub.add_parser("subseq", help="values along n_k = p k + d")
    _progression_args(sp)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--out", **_out_spec("csv:-"))

    sp = sub.add_parser("bounds", help="analytic bounds and moment identities")
    sp.add_argument("--series-order", type=int, default=16, metavar="M")
    sp.add_argument("--moment", type=_moment_arg, default=None, metavar="m,order")
    sp.add_argument("--out", **_out_spec("csv:-"))

    sp = sub.add_parser("fit", help="Gaussian fit of a subsequence in k-coordinate")
    _progression_args(sp)
    sp.add_argument("--k-start", type=int, default=1, help="first k of the fitted window")
    sp.add_argument("--out", **_out_spec("csv:-"))

    sp = sub.add_parser("curve", help="sample the envelope curve through a subsequence")
    _progression_args(sp)
    sp.add_argument("--samples", type=int, default=200, metavar="S")
    sp.add_argument("--out", **_out_spec("csv:-"))
    return parser


def _check_progression(args) -> None:
    if args.p < 1:
        raise DomainError("--p must be >= 1")
    if args.d < 0:
        raise DomainError("--d must be >= 0")
    if args.count < 1:
        raise DomainError("--count must be >= 1")


def cmd_scan(args) -> Table:
    if args.parallel < 1:
        raise DomainError("--parallel must be >= 1")
    config = ScanConfig(args.start, args.end, args.gamma, args.alpha, args.chunk)
    values = scan_range(config, workers=args.parallel, min_bits=args.prec_bits)
    meta = {"gamma": args.gamma, "start": args.start, "end": args.end, "alpha": args.alpha}
    return Table("scan", ["n", "value"], [[v.n, v.value] for v in values], meta)


def cmd_convergents(args) -> Table:
    rows = [
        [a.p, a.q, a.kind.value, a.err, a.residual, a.mu_eff]
        for a in approximations(args.max_q, args.semiconvergents)
    ]
    return Table("convergents", ["p", "q", "kind", "err", "residual", "mu_eff"], rows, {"max_q": args.max_q})


def cmd_peaks(args) -> Table:
    if args.parallel < 1:
        raise DomainError("--parallel must be >= 1")
    config = ScanConfig(args.start, args.end, args.gamma, args.alpha)
    groups = detect_peaks(scan_range(config, workers=args.parallel), args.alpha, args.gap)
    rows, objects = [], []
    for g in groups:
        p = g.progression.p if g.progression else None
        d = g.progression.d if g.progression else None
        rows.append([g.indices[0], g.indices[-1], len(g.indices), p, d, g.max_value, g.degenerate])
        objects.append({
            "indices": list(g.indices),
            "p": p,
            "d": d,
            "max_value": g.max_value,
            "degenerate": g.degenerate,
        })
    meta = {"gamma": args.gamma, "alpha": args.alpha, "gap": args.gap, "groups": objects}
    return Table("peaks", ["first", "last", "count", "p", "d", "max_value", "degenerate"], rows, meta)


def cmd_subseq(args) -> Table:
    _check_progression(args)
    prog = make_progression(args.p, args.d, args.gamma, k_max=args.count)
    meta = {"p": args.p, "d": args.d, "gamma": args.gamma}
    if args.alpha is not None:
        report = classify_persistence(prog, args.alpha, args.count)
        values, bounds = report.values, report.lower_bounds
        meta["persistence"] = {
            "alpha": args.alpha,
            "horizon": report.horizon,
            "holds_to": report.holds_to,
            "first_failure": report.first_failure,
            "persistent": report.persistent,
        }
        if args.out.format == "csv":
            print(f"holds_to={report.holds_to} first_failure={report.first_failure}", file=sys.stderr)
    else:
        values = [seq_value(prog.index(k), args.gamma).value for k in range(1, args.count + 1)]
        bounds = None
    rows = []
    for k in range(1, args.count + 1):
        row = [k, prog.index(k), values[k - 1]]
        if bounds is not None:
            row.append(bounds[k - 1])
        rows.append(row)
    columns = ["k", "n", "value"] + (["lower_bound"] if bounds is not None else [])
    return Table("subseq", columns, rows, meta)


def cmd_bounds(args) -> Table:
    series = truncated_limsup_series(args.series_order)
    rows = [
        ["exp_neg_pi_sq_over_2", float(exp_pi_sq_over_2_bound(64))],
        [f"series_order_{series.max_order}", series.partial_sum],
        ["series_last_term_sign", series.last_term_sign.value],
        ["series_valid_lower_bound", series.valid_lower_bound],
        # limsup |cos n|^(n^2) lower bounds on the two branches mu(pi) = 2 and mu(pi) > 2
        ["branch_mu_eq_2", series.partial_sum],
        ["branch_mu_gt_2", 1.0],
    ]
    if args.moment is not None:
        m, order = args.moment
        exact = central_moment_bruteforce(m, order)
        try:
            closed = moment_closed_form(m, order)
        except DomainError:
            closed = None
        rows += [
            ["moment_m", m],
            ["moment_order", order],
            ["moment_exact", exact],
            ["moment_closed_form", closed],
            ["moment_closed_form_match", None if closed is None else closed == exact],
        ]
    return Table("bounds", ["quantity", "value"], rows)


def _subsequence_points(args, k_start: int = 1):
    ks = range(k_start, k_start + args.count)
    return [(k, seq_value(args.p * k + args.d, args.gamma).value) for k in ks]


def cmd_fit(args) -> Table:
    _check_progression(args)
    if args.k_start < 1:
        raise DomainError("--k-start must be >= 1")
    points = _subsequence_points(args, args.k_start)
    fit = fit_gaussian(points)
    rows = [[fit.amplitude, fit.mean, fit.sigma, fit.r_squared, fit.converged, fit.iterations]]
    meta = {"p": args.p, "d": args.d, "gamma": args.gamma, "k_start": args.k_start, "count": args.count,
            "coordinate": "k"}
    return Table("fit", ["amplitude", "mean", "sigma", "r_squared", "converged", "iterations"], rows, meta)


def cmd_curve(args) -> Table:
    _check_progression(args)
    if args.samples < 2:
        raise DomainError("--samples must be >= 2")
    prog = make_progression(args.p, args.d, args.gamma, k_max=args.count)
    x_lo, x_hi = prog.index(1), prog.index(args.count)
    rows = []
    for x in np.linspace(x_lo, x_hi, args.samples):
        x = float(x)
        rows.append(["curve", x, eval_curve(prog, x)])
    points = []
    for k in range(1, args.count + 1):
        n = prog.index(k)
        v = seq_value(n, args.gamma).value
        points.append((n, v))
        rows.append(["point", n, v])
    meta = {"p": args.p, "d": args.d, "gamma": args.gamma, "rp": float(prog.rp), "rd": float(prog.rd)}
    if len(points) >= 2 and len({v for _, v in points}) > 1:
        meta["r_squared"] = r_squared(points, prog)
    return Table("curve", ["series", "x", "value"], rows, meta)


COMMANDS = {
    "scan": cmd_scan,
    "convergents": cmd_convergents,
    "peaks": cmd_peaks,
    "subseq": cmd_subseq,
    "bounds": cmd_bounds,
    "fit": cmd_fit,
    "curve": cmd_curve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.digits is not None and not 1 <= args.digits <= 40:
        print("cospow: --digits must be in [1, 40]", file=sys.stderr)
        return EXIT_USAGE
    try:
        table = COMMANDS[args.command](args)
        emit(table, args.out, args.digits)
    except CospowError as exc:
        print(f"cospow {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
