"""Command-line front end.

Subcommands: norm, spectrum, scan, selftest.  Output is deterministic JSON
(fixed field order, floats with 17 significant digits) or CSV series data;
exit codes: 0 success, 2 validation, 3 numerical non-convergence,
4 cross-check disagreement, 1 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import run_selftest
from .norms import (
    NonConvergedQuadrature,
    SpaceKind,
    SpaceSpec,
    inclusion_ratio_scan,
    monomial_norm,
    monomial_norm_asymptote,
    norm_parseval,
    norm_quadrature,
    seminorm_family,
)
from .scans import (
    DEFAULT_N_MAX,
    GrowthKind,
    InvalidEpsilon,
    NormScan,
    counterexample_blowup,
    eigen_membership_scan,
    expected_eigen_membership,
    gp_nuclearity_sum,
    schauder_partial_sum_check,
)
from .series import (
    BinomialSign,
    TaylorTruncation,
    binomial_series_coeffs,
    eigenfunction_truncation,
)
from .spectra import (
    BoundaryTooClose,
    banach_spectrum,
    filtered_grid,
    frechet_spectrum,
    lb_spectrum,
    step_union_crosscheck,
    waelbroeck,
)

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_CROSSCHECK = 4


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps_json(obj) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return dumps_json([obj.real, obj.imag])
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {dumps_json(v)}"
                          for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _write_output(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _csv_rows(rows: list[tuple], header: tuple[str, ...]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append("" if math.isnan(cell) else format(float(cell), ".17g"))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines)


def _classification_record(scan: NormScan) -> dict:
    c = scan.classification
    return {
        "kind": c.kind.value,
        "exponent": c.exponent,
        "stderr": c.stderr,
        "r_squared": c.r_squared,
    }


def _scan_record(scan: NormScan) -> dict:
    return {
        "degrees": list(scan.degrees),
        "values": list(scan.values),
        "classification": _classification_record(scan),
    }


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _parse_complex(text: str) -> complex:
    s = text.strip()
    if "," in s:
        re_s, im_s = s.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(s.replace("i", "j"))


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _load_coeffs(path: str) -> TaylorTruncation:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list) or not data:
        raise ValueError("coefficient file must be a nonempty JSON array")
    coeffs = []
    for entry in data:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ValueError("coefficient entries must be [re, im] pairs")
        coeffs.append(complex(float(entry[0]), float(entry[1])))
    return TaylorTruncation(np.array(coeffs, dtype=complex))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_norm(args: argparse.Namespace) -> int:
    if args.monomial:
        if args.index is None:
            print("norm --monomial requires -j/--index", file=sys.stderr)
            return EXIT_VALIDATION
        value = monomial_norm(args.index, args.p, args.alpha)
        record = {
            "schema": SCHEMA_VERSION,
            "command": "norm",
            "mode": "monomial",
            "j": args.index,
            "p": args.p,
            "alpha": args.alpha,
            "value": value,
        }
        if args.check_asymptotic:
            scaled = value ** args.p * float(args.index) ** (args.alpha + 1.0)
            limit = monomial_norm_asymptote(args.p, args.alpha)
            record["asymptotic"] = {
                "scaled": scaled,
                "limit": limit,
                "rel_gap": abs(scaled - limit) / limit,
            }
        _write_output(dumps_json(record), args.out)
        return EXIT_OK
    if args.coeffs_file is None:
        print("this norm mode requires --coeffs-file", file=sys.stderr)
        return EXIT_VALIDATION
    f = _load_coeffs(args.coeffs_file)
    if args.parseval:
        if args.p != 2.0:
            print("norm --parseval is defined for p = 2 only", file=sys.stderr)
            return EXIT_VALIDATION
        record = {
            "schema": SCHEMA_VERSION,
            "command": "norm",
            "mode": "parseval",
            "alpha": args.alpha,
            "degree": f.degree,
            "value": norm_parseval(f, args.alpha),
        }
        _write_output(dumps_json(record), args.out)
        return EXIT_OK
    if args.quadrature:
        value = norm_quadrature(f, args.p, args.alpha, rel_tol=args.rel_tol)
        record = {
            "schema": SCHEMA_VERSION,
            "command": "norm",
            "mode": "quadrature",
            "p": args.p,
            "alpha": args.alpha,
            "degree": f.degree,
            "rel_tol": args.rel_tol,
            "value": value,
        }
        _write_output(dumps_json(record), args.out)
        return EXIT_OK
    # seminorm family
    spec = SpaceSpec(args.p, args.alpha, SpaceKind(args.family))
    entries = seminorm_family(f, spec, args.nmax_steps)
    if args.format == "csv":
        rows = [(e.n, e.alpha, e.value) for e in entries]
        _write_output(_csv_rows(rows, ("n", "alpha", "value")), args.out)
        return EXIT_OK
    record = {
        "schema": SCHEMA_VERSION,
        "command": "norm",
        "mode": "family",
        "kind": args.family,
        "p": args.p,
        "alpha": args.alpha,
        "n_max": args.nmax_steps,
        "entries": [
            {"n": e.n, "alpha": e.alpha,
             "value": e.value if e.ok else float("nan"), "ok": e.ok}
            for e in entries
        ],
    }
    _write_output(dumps_json(record), args.out)
    return EXIT_OK


_SPECTRUM_BUILDERS = {
    "banach": banach_spectrum,
    "frechet": frechet_spectrum,
    "lb": lb_spectrum,
}


def _describe_record(desc) -> dict:
    return {
        "disk_r": desc.disk_r,
        "disk_center": desc.disk_center,
        "disk_radius": desc.disk_radius,
        "disk_boundary": desc.disk_boundary.value,
        "includes_origin": desc.includes_origin,
        "points": list(desc.points),
        "undetermined_points": list(desc.undetermined_points),
    }


def _cmd_spectrum(args: argparse.Namespace) -> int:
    if args.crosscheck:
        if args.kind == "banach":
            print("cross-check applies to frechet or lb kinds", file=sys.stderr)
            return EXIT_VALIDATION
        nx, ny = args.grid
        rect = args.rect
        grid = filtered_grid(args.kind, args.p, args.alpha, args.nmax,
                             re_range=(rect[0], rect[1]),
                             im_range=(rect[2], rect[3]),
                             nx=nx, ny=ny, band=args.band)
        report = step_union_crosscheck(args.kind, args.p, args.alpha,
                                       args.nmax, grid, band=args.band)
        record = {
            "schema": SCHEMA_VERSION,
            "command": "spectrum",
            "mode": "crosscheck",
            "kind": args.kind,
            "p": args.p,
            "alpha": args.alpha,
            "n_max": args.nmax,
            "grid": [nx, ny],
            "rect": list(rect),
            "band": args.band,
            "n_checked": report.n_checked,
            "n_excluded": nx * ny - report.n_checked,
            "disagreements": [[z.real, z.imag] for z in report.disagreements],
        }
        _write_output(dumps_json(record), args.out)
        return EXIT_OK if report.ok else EXIT_CROSSCHECK
    desc = _SPECTRUM_BUILDERS[args.kind](args.p, args.alpha)
    if args.waelbroeck:
        desc = waelbroeck(desc)
    record = {
        "schema": SCHEMA_VERSION,
        "command": "spectrum",
        "mode": "membership" if args.lam else "describe",
        "kind": args.kind,
        "p": args.p,
        "alpha": args.alpha,
        "waelbroeck": bool(args.waelbroeck),
        "set": _describe_record(desc),
    }
    if args.lam:
        record["verdicts"] = [
            {"lambda": [z.real, z.imag], "verdict": desc.membership(z).value}
            for z in map(_parse_complex, args.lam)
        ]
    _write_output(dumps_json(record), args.out)
    return EXIT_OK


def _scan_strict_failed(*scan_objs: NormScan) -> bool:
    return any(s.classification.kind is GrowthKind.UNDETERMINED
               for s in scan_objs)


def _cmd_scan(args: argparse.Namespace) -> int:
    record: dict = {"schema": SCHEMA_VERSION, "command": "scan",
                    "target": args.target}
    csv_payload: str | None = None
    strict_failed = False
    if args.target == "eigen":
        ms = args.m_list if args.m_list else [args.m]
        if any(m is None for m in ms):
            print("scan eigen requires -m or --m-list", file=sys.stderr)
            return EXIT_VALIDATION
        results = []
        if args.jobs > 1 and len(ms) > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                scans_out = list(pool.map(
                    lambda m: eigen_membership_scan(m, args.p, args.alpha,
                                                    args.nmax), ms))
        else:
            scans_out = [eigen_membership_scan(m, args.p, args.alpha, args.nmax)
                         for m in ms]
        for m, scan in zip(ms, scans_out):
            entry = {"m": m,
                     "expected_member": expected_eigen_membership(
                         m, args.p, args.alpha)}
            entry.update(_scan_record(scan))
            results.append(entry)
        strict_failed = _scan_strict_failed(*scans_out)
        record.update({"p": args.p, "alpha": args.alpha, "n_max": args.nmax,
                       "results": results})
        if args.format == "csv":
            rows = [(m, d, v) for m, s in zip(ms, scans_out)
                    for d, v in zip(s.degrees, s.values)]
            csv_payload = _csv_rows(rows, ("m", "degree", "value"))
    elif args.target == "counterexample":
        steps = _parse_int_list(args.steps) if args.steps else None
        report = counterexample_blowup(args.p, args.alpha, args.epsilon,
                                       args.kind, args.nmax, steps=steps)
        record.update({
            "kind": args.kind, "p": args.p, "alpha": args.alpha,
            "epsilon": args.epsilon,
            "source_exponent": report.source_exponent,
            "home_step": report.home_step,
            "source": _scan_record(report.source_scan),
            "inverse": [dict(step=n, **_scan_record(s))
                        for n, s in report.inverse_scans],
        })
        strict_failed = _scan_strict_failed(
            report.source_scan, *(s for _, s in report.inverse_scans))
        if args.format == "csv":
            rows = [("source", report.home_step, d, v)
                    for d, v in zip(report.source_scan.degrees,
                                    report.source_scan.values)]
            rows += [("inverse", n, d, v) for n, s in report.inverse_scans
                     for d, v in zip(s.degrees, s.values)]
            csv_payload = _csv_rows(rows, ("series", "step", "degree", "value"))
    elif args.target == "gp":
        scan = gp_nuclearity_sum(args.p, args.alpha, args.m, args.jmax)
        record.update({"p": args.p, "alpha": args.alpha, "m": args.m,
                       "j_max": args.jmax,
                       "expected_exponent":
                           1.0 - (1.0 - 1.0 / args.m) / args.p})
        record.update(_scan_record(scan))
        strict_failed = _scan_strict_failed(scan)
        if args.format == "csv":
            csv_payload = _csv_rows(list(zip(scan.degrees, scan.values)),
                                    ("degree", "value"))
    elif args.target == "inclusion":
        result = inclusion_ratio_scan(args.p, args.mu, args.gamma, args.jmax)
        subsample = [d for d in
                     (2 ** k for k in range(0, 30)) if d <= args.jmax]
        record.update({
            "p": args.p, "mu": args.mu, "gamma": args.gamma,
            "j_max": args.jmax,
            "exponent": result.exponent,
            "r_squared": result.r_squared,
            "expected_exponent": -(args.gamma - args.mu) / args.p,
            "degrees": subsample,
            "ratios": [float(result.ratios[d - 1]) for d in subsample],
        })
        if args.format == "csv":
            csv_payload = _csv_rows(
                list(zip(result.degrees.tolist(), result.ratios.tolist())),
                ("degree", "value"))
    else:  # schauder
        top = 2 * args.nmax
        if args.function == "constant":
            coeffs = np.zeros(top + 1, dtype=complex)
            coeffs[0] = 1.0
            f = TaylorTruncation(coeffs)
        elif args.function == "eigenfunction":
            if args.m is None:
                print("schauder --function eigenfunction requires -m",
                      file=sys.stderr)
                return EXIT_VALIDATION
            f = eigenfunction_truncation(args.m, top)
        else:  # binomial-plus
            if args.exponent is None:
                print("schauder --function binomial-plus requires --exponent",
                      file=sys.stderr)
                return EXIT_VALIDATION
            f = binomial_series_coeffs(args.exponent, BinomialSign.PLUS_Z, top)
        spec = SpaceSpec(args.p, args.alpha, SpaceKind(args.kind))
        report = schauder_partial_sum_check(
            f, spec, args.nmax, steps=tuple(_parse_int_list(args.basis_steps)))
        record.update({
            "kind": args.kind, "p": args.p, "alpha": args.alpha,
            "function": args.function, "n_big": report.n_big,
            "tails": [dict(step=n, **_scan_record(s))
                      for n, s in report.tails],
        })
        strict_failed = _scan_strict_failed(*(s for _, s in report.tails))
        if args.format == "csv":
            rows = [("tail", n, d, v) for n, s in report.tails
                    for d, v in zip(s.degrees, s.values)]
            csv_payload = _csv_rows(rows, ("series", "step", "degree", "value"))
    if args.format == "csv" and csv_payload is not None:
        _write_output(csv_payload, args.out)
    else:
        _write_output(dumps_json(record), args.out)
    if args.strict and strict_failed:
        print("strict mode: at least one scan is undetermined", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    results = run_selftest(quick=args.quick, jobs=args.jobs)
    if args.format == "json":
        record = {
            "schema": SCHEMA_VERSION,
            "command": "selftest",
            "quick": args.quick,
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                       for r in results],
            "all_passed": all(r.passed for r in results),
        }
        _write_output(dumps_json(record), args.out)
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}"
                 for r in results]
        _write_output("\n".join(lines), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesaro-bergman",
        description="Cesàro operator on weighted Bergman spaces: norms, "
                    "spectra, and divergence scans.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help="write output to this path")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    p_norm = sub.add_parser("norm", help="Bergman norms and seminorm families")
    mode = p_norm.add_mutually_exclusive_group(required=True)
    mode.add_argument("--monomial", action="store_true")
    mode.add_argument("--parseval", action="store_true")
    mode.add_argument("--quadrature", action="store_true")
    mode.add_argument("--family", choices=("frechet", "lb"))
    p_norm.add_argument("-j", "--index", type=int, default=None,
                        help="monomial degree")
    p_norm.add_argument("-p", type=float, default=2.0)
    p_norm.add_argument("--alpha", type=float, required=True)
    p_norm.add_argument("--coeffs-file", default=None,
                        help="JSON array of [re, im] coefficient pairs")
    p_norm.add_argument("--rel-tol", type=float, default=1e-9)
    p_norm.add_argument("--nmax-steps", type=int, default=8,
                        help="largest step index for --family")
    p_norm.add_argument("--check-asymptotic", action="store_true",
                        help="report the large-degree norm law for --monomial")
    common(p_norm)
    p_norm.set_defaults(func=_cmd_norm)

    p_spec = sub.add_parser("spectrum", help="spectral sets and membership")
    p_spec.add_argument("--kind", choices=("banach", "frechet", "lb"),
                        required=True)
    p_spec.add_argument("-p", type=float, default=2.0)
    p_spec.add_argument("--alpha", type=float, required=True)
    p_spec.add_argument("--lambda", dest="lam", action="append", default=[],
                        help="query value, e.g. '0.5' or '0.5,0.25' (re,im)")
    p_spec.add_argument("--waelbroeck", action="store_true",
                        help="use the Waelbroeck spectrum (closure)")
    p_spec.add_argument("--crosscheck", action="store_true",
                        help="compare limit spectrum against step assembly")
    p_spec.add_argument("--grid", type=lambda s: tuple(
        int(t) for t in s.lower().split("x")), default=(100, 100),
        help="cross-check lattice size, e.g. 100x100")
    p_spec.add_argument("--rect", type=lambda s: tuple(
        float(t) for t in s.split(",")), default=(-1.0, 2.0, -1.0, 1.0),
        help="re0,re1,im0,im1 lattice bounds")
    p_spec.add_argument("--nmax", type=int, default=100,
                        help="number of step spaces in the assembly")
    p_spec.add_argument("--band", type=float, default=1e-9,
                        help="boundary exclusion band")
    common(p_spec)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_scan = sub.add_parser("scan", help="truncation-norm divergence scans")
    p_scan.add_argument("target", choices=("eigen", "counterexample", "gp",
                                           "inclusion", "schauder"))
    p_scan.add_argument("-p", type=float, default=2.0)
    p_scan.add_argument("--alpha", type=float, default=1.0)
    p_scan.add_argument("-m", type=int, default=None)
    p_scan.add_argument("--m-list", type=_parse_int_list, default=None,
                        help="comma-separated m values (eigen batch)")
    p_scan.add_argument("--nmax", type=int, default=DEFAULT_N_MAX,
                        help="largest truncation degree")
    p_scan.add_argument("--jmax", type=int, default=None,
                        help="largest index for gp/inclusion scans")
    p_scan.add_argument("--epsilon", type=float, default=None)
    p_scan.add_argument("--kind", choices=("frechet", "lb"), default="frechet")
    p_scan.add_argument("--steps", default=None,
                        help="comma-separated step indices (counterexample)")
    p_scan.add_argument("--mu", type=float, default=None)
    p_scan.add_argument("--gamma", type=float, default=None)
    p_scan.add_argument("--function",
                        choices=("constant", "eigenfunction", "binomial-plus"),
                        default="eigenfunction",
                        help="series generator for schauder")
    p_scan.add_argument("--exponent", type=float, default=None,
                        help="binomial exponent for schauder binomial-plus")
    p_scan.add_argument("--basis-steps", default="1,2,3",
                        help="step seminorms tested by schauder")
    p_scan.add_argument("--strict", action="store_true",
                        help="exit 3 when any classification is undetermined")
    p_scan.add_argument("--jobs", type=int, default=1)
    common(p_scan)
    p_scan.set_defaults(func=_cmd_scan)

    p_test = sub.add_parser("selftest", help="run the built-in invariant suite")
    p_test.add_argument("--quick", action="store_true",
                        help="smaller sizes, finishes in seconds")
    p_test.add_argument("--jobs", type=int, default=1)
    p_test.add_argument("--out", default=None, help="write output to this path")
    p_test.add_argument("--format", choices=("text", "json"), default="text")
    p_test.set_defaults(func=_cmd_selftest)
    return parser


def _validate_scan_args(args: argparse.Namespace) -> str | None:
    if args.command != "scan":
        return None
    if args.target == "counterexample" and args.epsilon is None:
        return "scan counterexample requires --epsilon"
    if args.target == "gp":
        if args.m is None:
            return "scan gp requires -m"
        if args.jmax is None:
            args.jmax = 10 ** 5
    if args.target == "inclusion":
        if args.mu is None or args.gamma is None:
            return "scan inclusion requires --mu and --gamma"
        if args.jmax is None:
            args.jmax = 10 ** 4
    return None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse validation or --help/--version
        return int(exc.code or 0)
    message = _validate_scan_args(args)
    if message:
        print(message, file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except NonConvergedQuadrature as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidEpsilon, BoundaryTooClose, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
