"""Command-line interface.

Usage::

    photonbell prob --process 1 --beta 0 --chi1 0 --chi2 90
    photonbell bell --process 2 --beta 0.2 --angles 0,23,45,67
    photonbell scan --process 2 --angles 0,23,45,67 --betas 0.01,0.05,0.1,0.2 --format csv
    photonbell scan --process 2 --angles 0,23,45,67 --beta-range 0:0.99:200 --frontier below
    photonbell oracle --level integrals
    photonbell search --process 1 --beta 0 --objective min
    photonbell simulate --process 2 --beta 0.01 --angles 0,23,45,67 --n 1000000 --seed 7

Angles are given in degrees.  Exit codes: 0 success, 2 invalid input,
3 oracle failure, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .amplitude import ProcessKind
from .bell import AngleQuad, s_statistic
from .closed_form import Which, joint, marginal, quadruple, statistical_dependence_gap
from .errors import ConvergenceError, DomainError, InputValidationError
from .integrals import QuadratureSpec
from .kinematics import check_beta
from .montecarlo import GENERATOR, estimate_s
from .oracles import LEVELS, run_level
from .search import SearchConfig, search, violation_frontier

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ORACLE = 3
EXIT_CONVERGENCE = 4

FORMATS = ("table", "csv", "json")


def _number(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputValidationError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise InputValidationError(f"value must be finite, got {text!r}")
    return value


def parse_angles(text: str) -> tuple[float, float, float, float]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 4:
        raise InputValidationError(f"--angles needs four comma-separated degrees, got {text!r}")
    return tuple(_number(p) for p in parts)


def parse_betas(betas: str | None, beta_range: str | None) -> list[float]:
    values: list[float] = []
    if betas:
        values.extend(_number(p) for p in betas.split(",") if p.strip())
    if beta_range:
        fields = beta_range.split(":")
        if len(fields) != 3:
            raise InputValidationError(f"--beta-range must be start:stop:count, got {beta_range!r}")
        start, stop = _number(fields[0]), _number(fields[1])
        try:
            count = int(fields[2])
        except ValueError:
            raise InputValidationError(f"beta-range count must be an integer, got {fields[2]!r}") from None
        if count < 1:
            raise InputValidationError("beta-range count must be >= 1")
        values.extend(float(b) for b in np.linspace(start, stop, count))
    if not values:
        raise InputValidationError("empty beta range: give --betas or --beta-range")
    for b in values:
        check_beta(b)
    return values


def _angle_params(degrees) -> dict:
    names = ("chi1", "chi2", "chi1p", "chi2p")
    out = {}
    for name, deg in zip(names, degrees):
        out[f"{name}_deg"] = deg
        out[f"{name}_rad"] = math.radians(deg)
    return out


def manifest(subcommand: str, parameters: dict) -> dict:
    return {
        "tool": "photonbell",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": parameters,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(k)) for k in header])
    return buf.getvalue()


def render_json(man: dict, results) -> str:
    return json.dumps({"manifest": man, "results": results}, indent=2) + "\n"


def _short(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.10g}"
    return "" if value is None else str(value)


def render_table(rows: list[dict], notes: list[str] | None = None) -> str:
    header = list(rows[0].keys())
    cells = [[_short(r.get(k)) for k in header] for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)
    if notes:
        lines.append("")
        lines.extend(notes)
    return "\n".join(lines) + "\n"


def emit(args, man: dict, rows: list[dict], results, notes: list[str] | None = None) -> None:
    if args.format == "json":
        text = render_json(man, results)
    elif args.format == "csv":
        text = render_csv(rows)
    else:
        text = render_table(rows, notes)
    if args.output:
        path = Path(args.output)
        path.write_text(text)
        if args.format != "json":
            Path(str(path) + ".manifest.json").write_text(json.dumps(man, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _report_row(rep) -> dict:
    deg = rep.quad.degrees()
    row = {
        "process": rep.process.value,
        "beta": rep.beta,
        "chi1_deg": deg[0],
        "chi2_deg": deg[1],
        "chi1p_deg": deg[2],
        "chi2p_deg": deg[3],
        "s": rep.s,
        "verdict": rep.verdict.value,
    }
    row.update({f"term{i + 1}": t for i, t in enumerate(rep.terms)})
    return row


def cmd_prob(args) -> int:
    process = ProcessKind.parse(args.process)
    beta = check_beta(args.beta)
    c1, c2 = math.radians(args.chi1), math.radians(args.chi2)
    quad = quadruple(process, beta, c1, c2)
    row = {
        "process": process.value,
        "beta": beta,
        "chi1_deg": args.chi1,
        "chi2_deg": args.chi2,
        "joint": float(joint(process, beta, c1, c2)),
        "marginal_first": float(marginal(process, beta, c1, Which.FIRST)),
        "marginal_second": float(marginal(process, beta, c2, Which.SECOND)),
        "dependence_gap": float(statistical_dependence_gap(process, beta, c1, c2)),
        "p_aligned_aligned": float(quad[0]),
        "p_aligned_orthogonal": float(quad[1]),
        "p_orthogonal_aligned": float(quad[2]),
        "p_orthogonal_orthogonal": float(quad[3]),
    }
    params = {"process": process.value, "beta": beta, "chi1_deg": args.chi1, "chi1_rad": c1, "chi2_deg": args.chi2, "chi2_rad": c2}
    emit(args, manifest("prob", params), [row], row)
    return EXIT_OK


def cmd_bell(args) -> int:
    process = ProcessKind.parse(args.process)
    beta = check_beta(args.beta)
    degrees = parse_angles(args.angles)
    rep = s_statistic(process, beta, AngleQuad.from_degrees(degrees))
    row = _report_row(rep)
    results = dict(row, terms=rep.labelled_terms())
    params = {"process": process.value, "beta": beta, **_angle_params(degrees)}
    notes = [f"{label:>16s} = {value:+.10f}" for label, value in rep.labelled_terms().items()]
    notes.append(f"{'S':>16s} = {rep.s:+.10f}   verdict: {rep.verdict.value}")
    emit(args, manifest("bell", params), [row], results, notes)
    return EXIT_OK


def cmd_scan(args) -> int:
    process = ProcessKind.parse(args.process)
    degrees = parse_angles(args.angles)
    betas = parse_betas(args.betas, args.beta_range)
    q = AngleQuad.from_degrees(degrees)
    rows = [_report_row(s_statistic(process, b, q)) for b in betas]
    params = {"process": process.value, "betas": betas, **_angle_params(degrees)}
    results = {"rows": rows}
    notes = []
    if args.frontier:
        frontier = violation_frontier(process, q, args.frontier)
        params["frontier_direction"] = args.frontier
        results["frontier_beta"] = frontier
        for row in rows:
            row["frontier_beta"] = frontier
        notes.append(f"largest beta still violating {args.frontier}: {frontier}")
    emit(args, manifest("scan", params), rows, results, notes)
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol)
    levels = LEVELS if args.level == "all" else (args.level,)
    rows = []
    for level in levels:
        for check in run_level(level, spec):
            rows.append(
                {
                    "level": level,
                    "check": check.name,
                    "max_deviation": check.max_deviation,
                    "tolerance": check.tolerance,
                    "points": check.points,
                    "passed": check.passed,
                }
            )
    params = {"level": args.level, "abs_tol": args.abs_tol, "rel_tol": args.rel_tol}
    ok = all(r["passed"] for r in rows)
    emit(args, manifest("oracle", params), rows, {"passed": ok, "checks": rows}, ["ALL PASSED" if ok else "FAILURES PRESENT"])
    return EXIT_OK if ok else EXIT_ORACLE


def cmd_search(args) -> int:
    process = ProcessKind.parse(args.process)
    beta = check_beta(args.beta)
    cfg = SearchConfig(
        grid_points_per_angle=args.grid_points,
        refine_iterations=args.refine_iterations,
        refine_initial_step=math.radians(args.refine_step),
        objective=args.objective,
    )
    res = search(process, beta, cfg)
    rep = s_statistic(process, beta, res.best_quad)
    row = _report_row(rep)
    row["objective"] = cfg.objective.value
    row["distance_outside_lhv"] = max(0.0, rep.s, -1.0 - rep.s)
    row["distance_to_nearest_bound"] = min(abs(rep.s), abs(rep.s + 1.0))
    params = {
        "process": process.value,
        "beta": beta,
        "objective": cfg.objective.value,
        "grid_points_per_angle": cfg.grid_points_per_angle,
        "refine_iterations": cfg.refine_iterations,
        "refine_initial_step_deg": args.refine_step,
    }
    results = dict(row, trace=[list(t) for t in res.trace])
    notes = [
        f"best S = {rep.s:+.12f} ({rep.verdict.value}); distance to nearest LHV bound "
        f"{row['distance_to_nearest_bound']:.3e}"
    ]
    emit(args, manifest("search", params), [row], results, notes)
    return EXIT_OK


def cmd_simulate(args) -> int:
    process = ProcessKind.parse(args.process)
    beta = check_beta(args.beta)
    degrees = parse_angles(args.angles)
    if args.n < 100:
        raise InputValidationError(f"--n must be >= 100, got {args.n}")
    if args.shards < 1:
        raise InputValidationError(f"--shards must be >= 1, got {args.shards}")
    est = estimate_s(process, beta, AngleQuad.from_degrees(degrees), args.n, args.seed, shards=args.shards)
    row = {
        "process": process.value,
        "beta": beta,
        "n_per_setting": est.n,
        "seed": est.seed,
        "shards": est.shards,
        "s_hat": est.s_hat,
        "s_se": est.s_se,
        "s_exact": est.s_exact,
        "z": (est.s_hat - est.s_exact) / est.s_se,
        "p1_hat": est.p_hat[0],
        "p2_hat": est.p_hat[1],
        "p3_hat": est.p_hat[2],
        "p4_hat": est.p_hat[3],
        "marginal_first_hat": est.marginals[0],
        "marginal_second_hat": est.marginals[1],
    }
    params = {
        "process": process.value,
        "beta": beta,
        **_angle_params(degrees),
        "n_per_setting": args.n,
        "seed": args.seed,
        "shards": args.shards,
        "generator": GENERATOR,
    }
    results = dict(row, term_se=list(est.se), frequencies=[list(f) for f in est.frequencies])
    emit(args, manifest("simulate", params), [row], results)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonbell", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default="table")
        p.add_argument("--output", help="write to this file instead of stdout")

    def process_beta(p, beta=True):
        p.add_argument("--process", type=int, choices=(1, 2), required=True)
        if beta:
            p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("prob", help="joint and single-photon probabilities")
    process_beta(p)
    p.add_argument("--chi1", type=float, required=True, help="degrees")
    p.add_argument("--chi2", type=float, required=True, help="degrees")
    common(p)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("bell", help="Clauser-Horne statistic for four analyzer angles")
    process_beta(p)
    p.add_argument("--angles", required=True, help="chi1,chi2,chi1',chi2' in degrees")
    common(p)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("scan", help="S as a function of beta")
    process_beta(p, beta=False)
    p.add_argument("--angles", required=True, help="chi1,chi2,chi1',chi2' in degrees")
    p.add_argument("--betas", help="comma-separated beta values")
    p.add_argument("--beta-range", help="start:stop:count (inclusive linspace)")
    p.add_argument("--frontier", choices=("above", "below"), help="also report the violation frontier")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="verify closed forms against numerical oracles")
    p.add_argument("--level", choices=LEVELS + ("all",), default="all")
    p.add_argument("--abs-tol", type=float, default=1e-15, help="quadrature absolute tolerance")
    p.add_argument("--rel-tol", type=float, default=1e-13, help="quadrature relative tolerance")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("search", help="grid search plus pattern-search refinement")
    process_beta(p)
    p.add_argument("--objective", choices=("min", "max"), default="min")
    p.add_argument("--grid-points", type=int, default=24)
    p.add_argument("--refine-iterations", type=int, default=200)
    p.add_argument("--refine-step", type=float, default=5.0, help="initial step in degrees")
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of S")
    process_beta(p)
    p.add_argument("--angles", required=True, help="chi1,chi2,chi1',chi2' in degrees")
    p.add_argument("--n", type=int, required=True, help="samples per setting")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")
    p.add_argument("--shards", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputValidationError, DomainError) as exc:
        print(f"photonbell: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"photonbell: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
