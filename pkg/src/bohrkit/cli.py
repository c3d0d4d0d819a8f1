"""Command-line front end: ``bohrkit <subcommand> [flags]``.

Exit codes: 0 for the expected outcome, 1 for usage, domain or precondition
errors (one line on stderr), 2 when a campaign finds a violation, a witness
search comes back empty, or the self-check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import checks
from . import functionals as fn
from . import multidim as md
from . import radii
from . import sharpness as sh
from ._validation import ArgumentError, BohrError
from .series import (
    CoefficientSeries,
    blaschke_series,
    default_truncation,
    moebius_series,
    schur_series,
    shifted_moebius_series,
)

RADIUS_ALIASES = {
    "rp": "r_p",
    "Rnp": "R_Np",
    "Rp": "R_p",
    "rap": "r_ap",
    "ra1": "r_a1",
    "ra2": "r_a2",
    "classical": "classical_third",
    "bombieri": "bombieri_sqrt2",
}
TABLE_KINDS = ("rp", "rap", "ra1", "ra2", "Rnp", "Rp", "kn", "kn0")
VERIFY_KINDS = (
    "classical", "bombieri", "refined-a", "refined-b", "improved", "refined-improved", "dr", "kn0",
)
WITNESS_KINDS = ("classical", "bombieri", "refined-b", "improved", "refined-improved")
SERIES_FAMILIES = ("moebius", "shifted-moebius", "blaschke", "schur")

BOUNDS_FIELDS = ("n", "kn_lower", "kn_upper", "kn_vacuous", "kn0_lower", "kn0_upper", "kn0_vacuous")
EXTREMAL_FIELDS = ("z1", "z2", "full_sum", "tail_bound", "exceeds_one")


def schema_path(name: str):
    """Location of the JSON schema ``name`` shipped with the package."""
    return resources.files("bohrkit") / "schemas" / f"{name}.schema.json"


class ArgParser(argparse.ArgumentParser):
    """Reports usage errors with exit status 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- formatting

def _plain(obj):
    """Convert numpy scalars and tuples so ``json`` can serialise them."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def to_csv(fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([csv_cell(v) for v in row])
    return buf.getvalue()


def to_human(obj, indent: str = "") -> str:
    lines = []
    for key, value in _plain(obj).items():
        if isinstance(value, dict) and value:
            lines.append(f"{indent}{key}:")
            lines.append(to_human(value, indent + "  ").rstrip("\n"))
        elif isinstance(value, float):
            lines.append(f"{indent}{key}: {value:.12g}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines) + "\n"


def rows_to_human(fields, rows) -> str:
    def cell(v):
        return f"{v:.10g}" if isinstance(v, float) else csv_cell(v)

    table = [list(fields)] + [[cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(fields))]
    return "".join(
        "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in table
    )


def write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit_record(args, record: dict, fields=None, row=None) -> None:
    if args.format == "json":
        text = to_json(record)
    elif args.format == "csv":
        if fields is None:
            raise ArgumentError(f"--format csv is not available for {args.command}")
        text = to_csv(fields, [row])
    else:
        text = to_human(record)
    write_output(text, args.out)


def emit_rows(args, fields, rows, json_key: str, extra: dict | None = None) -> None:
    if args.format == "json":
        record = dict(extra or {})
        record[json_key] = [dict(zip(fields, row)) for row in rows]
        text = to_json(record)
    elif args.format == "csv":
        text = to_csv(fields, rows)
    else:
        text = rows_to_human(fields, rows)
    write_output(text, args.out)


# ---------------------------------------------------------------- grids

def parse_grid(spec: str, integer: bool = False) -> list:
    """Parse ``start:stop:step`` (stop inclusive), a comma list, or a single value."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ArgumentError(f"grid {spec!r} must look like start:stop:step")
        start, stop, step = (float(x) for x in parts)
        if not step > 0:
            raise ArgumentError(f"grid step must be > 0 in {spec!r}")
        count = math.floor((stop - start) / step + 1e-9) + 1 if stop >= start else 0
        values = [round(start + i * step, 12) for i in range(count)]
    elif spec == "":
        values = []
    else:
        values = [float(x) for x in spec.split(",")]
    if integer:
        if any(v != int(v) for v in values):
            raise ArgumentError(f"grid {spec!r} must contain integers")
        return [int(v) for v in values]
    return values


# ---------------------------------------------------------------- radius / table

def compute_radius(kind: str, a=None, p=1.0, N=1) -> radii.RadiusResult:
    name = RADIUS_ALIASES.get(kind, kind)

    def need_a():
        if a is None:
            raise ArgumentError(f"--a is required for kind {kind}")
        return a

    if name == "classical_third":
        return radii.classical_radius()
    if name == "bombieri_sqrt2":
        return radii.bombieri_radius()
    if name == "r_p":
        return radii.radius_r_p(need_a(), p)
    if name == "R_Np":
        return radii.radius_R_Np(N, p)
    if name == "R_p":
        return radii.radius_R_p(p)
    if name == "r_ap":
        return radii.radius_r_ap(need_a(), p)
    if name == "r_a1":
        return radii.radius_r_a1(need_a())
    if name == "r_a2":
        return radii.radius_r_a2(need_a())
    raise ArgumentError(f"unknown radius kind {kind!r}")


def cmd_radius(args) -> int:
    res = compute_radius(args.kind, args.a, args.p, args.N)
    emit_record(args, res.to_dict(), radii.CSV_FIELDS, res.csv_row())
    return 0


def _table_rows(args):
    kind = args.kind
    if kind in ("kn", "kn0"):
        bounds = md.kn_bounds if kind == "kn" else md.kn0_bounds
        rows = []
        for n in parse_grid(args.n, integer=True):
            b = bounds(n)
            rows.append([n, b.lower, b.upper, b.vacuous])
        return ("n", "lower", "upper", "vacuous"), rows
    a_grid = parse_grid(args.a) if kind in ("rp", "rap", "ra1", "ra2") else [None]
    p_grid = parse_grid(args.p) if kind in ("rp", "rap", "Rnp", "Rp") else [None]
    N_grid = parse_grid(args.N, integer=True) if kind == "Rnp" else [None]
    rows = []
    for a in a_grid:
        for p in p_grid:
            for N in N_grid:
                rows.append(compute_radius(kind, a, 1.0 if p is None else p, 1 if N is None else N).csv_row())
    return radii.CSV_FIELDS, rows


def gnuplot_script(kind: str, csv_path: str, fields) -> str:
    if kind in ("kn", "kn0"):
        plots = (
            f'plot "{csv_path}" using 1:2 with lines title "lower", '
            f'"{csv_path}" using 1:3 with lines title "upper"'
        )
        xlabel = "n"
    else:
        xcol = {"Rnp": 3, "Rp": 3}.get(kind, 2)
        xlabel = fields[xcol - 1]
        plots = f'plot "{csv_path}" using {xcol}:5 with lines title "{kind}"'
    return (
        'set datafile separator ","\n'
        f'set xlabel "{xlabel}"\n'
        'set ylabel "radius"\n'
        "set key top right\n"
        f"{plots}\n"
    )


def cmd_table(args) -> int:
    if args.gnuplot and args.out is None:
        raise ArgumentError("--gnuplot needs --out so the script can reference the CSV")
    fields, rows = _table_rows(args)
    emit_rows(args, fields, rows, "rows", {"kind": args.kind})
    if args.gnuplot:
        script = Path(args.out).with_suffix(".gp")
        write_output(gnuplot_script(args.kind, args.out, fields), str(script))
    return 0


# ---------------------------------------------------------------- verify / sharpness

def _truncation(args) -> int:
    return args.M if args.M is not None else default_truncation()


def cmd_verify(args) -> int:
    rep = sh.falsify_campaign(
        args.kind, r=args.r, trials=args.trials, seed=args.seed, p=args.p, N=args.N,
        q=args.q, n=args.n, offset=args.offset, M=_truncation(args), degree=args.degree,
    )
    d = rep.to_dict()
    emit_record(
        args, d,
        ("kind", "r", "radius", "trials", "seed", "violations", "worst_margin", "worst_trial"),
        [rep.inequality_kind, rep.r, rep.radius, rep.trials, rep.seed, rep.violations,
         rep.worst_margin, rep.worst_trial],
    )
    return 0 if rep.violations == 0 else 2


def cmd_sharpness(args) -> int:
    rep = sh.find_witness(args.kind, args.r, p=args.p, N=args.N, a=args.a, M=_truncation(args))
    emit_record(
        args, rep.to_dict(),
        ("kind", "r", "radius", "witness_a", "functional_value", "excess", "truncation_error", "found"),
        [rep.inequality_kind, rep.r, rep.radius, rep.witness.get("a"), rep.functional_value,
         rep.excess, rep.truncation_error, rep.found],
    )
    if not rep.found:
        print(f"bohrkit: {rep.message}", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------- multidim

def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_dr_check(args) -> int:
    if args.series is not None:
        F = md.MultiSeries.from_dict(_load_json(args.series))
    else:
        spec = md.SamplerSpec(construction=args.construction, degree=args.degree)
        F = md.sample_polydisk_bounded(args.n, args.seed, spec)
    rep = md.dr_check(F, args.q)
    d = rep.to_dict()
    d["coefficient_bound"] = rep.coefficient_bound
    d["margin"] = rep.margin
    d["construction"] = "file" if args.series is not None else args.construction
    d["n"] = F.dimension
    if args.format == "csv":
        rows = [[k + 1, b, rep.coefficient_bound, ok] for k, (b, ok) in enumerate(zip(rep.b, rep.per_k_ok))]
        write_output(to_csv(("k", "b_k", "bound", "ok"), rows), args.out)
    else:
        emit_record(args, d)
    return 0 if rep.ok else 2


def cmd_bounds(args) -> int:
    rows = []
    for n in parse_grid(args.n, integer=True):
        kn, kn0 = md.kn_bounds(n), md.kn0_bounds(n)
        rows.append([n, kn.lower, kn.upper, kn.vacuous, kn0.lower, kn0.upper, kn0.vacuous])
    emit_rows(args, BOUNDS_FIELDS, rows, "rows")
    return 0


def cmd_extremal_scan(args) -> int:
    a = args.a if args.a is not None else 1.0 / math.sqrt(2.0)
    F = md.two_variable_extremal(a, args.degree)
    rows = []
    grid = parse_grid(args.grid)
    for x in grid:
        for y in grid:
            s = md.homogeneous_majorants(F, [x, y])
            rows.append([x, y, s.full_sum, s.tail_bound, s.full_sum - s.tail_bound > 1.0])
    emit_rows(args, EXTREMAL_FIELDS, rows, "rows", {"a": a, "D": args.degree})
    return 0


# ---------------------------------------------------------------- selfcheck / series

def cmd_selfcheck(args) -> int:
    report = checks.run_selfcheck(args.seed, args.trials, args.multidim_trials)
    if args.format == "json":
        text = to_json(report)
    else:
        text = "".join(
            f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}\n" for c in report["checks"]
        )
    write_output(text, args.out)
    return 0 if report["passed"] else 2


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ArgumentError(f"cannot parse complex list {text!r}") from None


def build_series(args) -> CoefficientSeries:
    M = _truncation(args)
    if args.family in ("moebius", "shifted-moebius"):
        if args.a is None:
            raise ArgumentError(f"--a is required for family {args.family}")
        maker = moebius_series if args.family == "moebius" else shifted_moebius_series
        return maker(args.a, M)
    if args.family == "blaschke":
        if args.zeros is None:
            raise ArgumentError("--zeros is required for family blaschke")
        return blaschke_series(_parse_complex_list(args.zeros), args.rotation, M)
    if args.params is None:
        raise ArgumentError("--params is required for family schur")
    return schur_series(_parse_complex_list(args.params), M)


def cmd_series(args) -> int:
    f = build_series(args)
    if args.format == "csv":
        rows = [[k, c.real, c.imag] for k, c in enumerate(f.coeffs)]
        write_output(to_csv(("k", "re", "im"), rows), args.out)
    else:
        emit_record(args, f.to_dict())
    return 0


def cmd_evaluate(args) -> int:
    f = CoefficientSeries.from_dict(_load_json(args.series))
    z = None if args.z is None else complex(args.z.replace(" ", ""))
    rep = fn.evaluate(args.kind.replace("-", "_"), f, r=args.r, z=z, p=args.p, N=args.N)
    emit_record(args, rep.to_dict(), fn.CSV_FIELDS, rep.csv_row())
    return 0 if not rep.violated else 2


# ---------------------------------------------------------------- parser

def _common(formats=("json", "csv", "human"), default="json") -> ArgParser:
    parent = ArgParser(add_help=False)
    parent.add_argument("--format", choices=formats, default=default)
    parent.add_argument("--out", default=None, help="write to this file instead of stdout")
    return parent


def _truncation_flag() -> ArgParser:
    parent = ArgParser(add_help=False)
    parent.add_argument("--M", type=int, default=None,
                        help="truncation order (default: $BOHR_TRUNCATION or 512)")
    return parent


def build_parser() -> ArgParser:
    parser = ArgParser(prog="bohrkit", description="Bohr-type radii, functionals and certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgParser)
    common, trunc = _common(), _truncation_flag()

    p = sub.add_parser("radius", parents=[common], help="compute one radius")
    p.add_argument("--kind", required=True, choices=sorted(RADIUS_ALIASES))
    p.add_argument("--a", type=float)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1)
    p.set_defaults(handler=cmd_radius)

    p = sub.add_parser("table", parents=[_common(("csv", "json", "human"), "csv")],
                       help="tabulate a radius or bound over a grid")
    p.add_argument("--kind", required=True, choices=TABLE_KINDS)
    p.add_argument("--a", default="0:0.99:0.01", help="grid start:stop:step, list or value")
    p.add_argument("--p", default="1")
    p.add_argument("--N", default="1")
    p.add_argument("--n", default="2:16:1")
    p.add_argument("--gnuplot", action="store_true", help="also write <out>.gp")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify", parents=[common, trunc], help="randomised falsification campaign")
    p.add_argument("--kind", required=True, choices=VERIFY_KINDS)
    p.add_argument("--r", type=float)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--offset", type=float)
    p.add_argument("--degree", type=int)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("sharpness", parents=[common, trunc], help="search for an extremal witness")
    p.add_argument("--kind", required=True, choices=WITNESS_KINDS)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--a", type=float)
    p.set_defaults(handler=cmd_sharpness)

    p = sub.add_parser("multidim", help="polydisk computations")
    msub = p.add_subparsers(dest="multidim_command", required=True, parser_class=ArgParser)
    m = msub.add_parser("dr-check", parents=[common], help="coefficient-sum check for one function")
    m.add_argument("--n", type=int, default=2)
    m.add_argument("--q", type=float, default=2.0)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--construction", choices=("line", "product"), default="line")
    m.add_argument("--degree", type=int, default=16)
    m.add_argument("--series", help="JSON file holding a multivariate series")
    m.set_defaults(handler=cmd_dr_check)
    m = msub.add_parser("bounds", parents=[common], help="K_n and K_n^0 bound table")
    m.add_argument("--n", default="2:16:1")
    m.set_defaults(handler=cmd_bounds)
    m = msub.add_parser("extremal-scan", parents=[common], help="majorant of the two-variable extremal")
    m.add_argument("--a", type=float)
    m.add_argument("--grid", default="0:0.75:0.05")
    m.add_argument("--degree", type=int, default=md.DEFAULT_DEGREE)
    m.set_defaults(handler=cmd_extremal_scan)

    p = sub.add_parser("selfcheck", parents=[_common(("json", "human"), "json")],
                       help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--multidim-trials", type=int, default=200)
    p.set_defaults(handler=cmd_selfcheck)

    p = sub.add_parser("series", parents=[common, trunc], help="coefficients of a Schur-class function")
    p.add_argument("--family", required=True, choices=SERIES_FAMILIES)
    p.add_argument("--a", type=float)
    p.add_argument("--zeros", help="comma-separated complex zeros, e.g. 0.5,-0.5+0.1j")
    p.add_argument("--rotation", type=float, default=0.0, help="angle of the unimodular factor")
    p.add_argument("--params", help="comma-separated Schur parameters")
    p.set_defaults(handler=cmd_series)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate a functional on a saved series")
    p.add_argument("--series", required=True, help="JSON file written by 'bohrkit series'")
    p.add_argument("--kind", required=True, choices=[k.replace("_", "-") for k in fn.KINDS])
    p.add_argument("--r", type=float)
    p.add_argument("--z")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1)
    p.set_defaults(handler=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (BohrError, ValueError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"bohrkit: error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
