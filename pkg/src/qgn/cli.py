"""Command-line harness: ``qgn solve``, ``qgn sweep``, ``qgn compare-nm``.

Exit codes: 0 converged, 1 usage or parse error, 2 iteration limit
reached, 3 any other solver failure.
For sweeps and comparisons the worst code over all runs is returned.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import report
from .errors import QGNError
from .model import REGISTRY, ResidualProblem, get_problem
from .problemfile import load as load_problem_file, parse_vector
from .qcalc import DilationParams
from .solver import SolveConfig, SolveResult, Status, nelder_mead, q_gauss_newton

EXIT_OK, EXIT_USAGE, EXIT_MAXITER, EXIT_SOLVER = 0, 1, 2, 3

SWEEP_QS = (0.9, 0.95, 0.99, 0.9995, 1.0)
COMPARE_QS = (0.9, 0.95, 0.99, 0.9995)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for MaxIterationsReached.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exit_code(status: Status) -> int:
    if status is Status.CONVERGED:
        return EXIT_OK
    if status is Status.MAX_ITERATIONS:
        return EXIT_MAXITER
    return EXIT_SOLVER


def _floats(text: str) -> tuple[float, ...]:
    try:
        return parse_vector(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, q_default: Optional[str]):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", choices=sorted(REGISTRY), help="built-in problem name")
    src.add_argument("--file", type=Path, help="problem file (see README for the format)")
    p.add_argument("--q", type=_floats, default=_floats(q_default) if q_default else None,
                   help=f"dilation parameter(s), comma separated (default: {q_default})")
    p.add_argument("--x0", type=_floats, help="initial point, comma separated (default: problem's x0)")
    p.add_argument("--tol", type=float, default=1e-6, help="stopping tolerance (default: 1e-6)")
    p.add_argument("--max-iter", type=int, default=100, help="iteration limit (default: 100)")
    p.add_argument("--alpha", type=float, default=1.0, help="fixed step factor in (0, 1] (default: 1)")
    p.add_argument("--jacobian", choices=("analytic", "numeric"), default="analytic",
                   help="use the analytic q-Jacobian when the problem has one (default) or always differentiate numerically")
    p.add_argument("--stop-on", choices=("step", "sse"), default="step",
                   help="quantity compared against --tol (default: step norm)")
    p.add_argument("--zero-threshold", type=float, default=1e-12,
                   help="|x_i| at or below this uses the classical derivative (default: 1e-12)")
    p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    p.add_argument("--output", type=Path, help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgn", description="q-Gauss-Newton least-squares solver and experiment harness")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="run one q-Gauss-Newton solve and print its trace")
    _add_common(solve, "1")

    sweep = sub.add_parser("sweep", help="solve once per q value and summarise")
    _add_common(sweep, ",".join(f"{q:g}" for q in SWEEP_QS))
    sweep.add_argument("--trace-dir", type=Path, help="also write one trace CSV per q into this directory")

    cmp_ = sub.add_parser("compare-nm", help="compare q-Gauss-Newton with Nelder-Mead on a scalar problem")
    _add_common(cmp_, ",".join(f"{q:g}" for q in COMPARE_QS))
    cmp_.add_argument("--nm-tol", type=float, default=1e-4,
                      help="Nelder-Mead tolerance on simplex size and value spread (default: 1e-4)")
    cmp_.add_argument("--nm-max-iter", type=int, default=200)
    cmp_.add_argument("--nm-objective", choices=("residual", "sse"), default="residual",
                      help="minimise the residual itself (default) or half its square")

    sub.add_parser("list", help="list built-in problems")
    return parser


# --------------------------------------------------------------------------
# plumbing
# --------------------------------------------------------------------------

def _load_problem(args) -> ResidualProblem:
    if args.problem:
        return get_problem(args.problem)
    return load_problem_file(args.file).to_problem()


def _x0(args, problem: ResidualProblem) -> np.ndarray:
    if args.x0 is not None:
        x0 = args.x0
    elif problem.x0 is not None:
        x0 = problem.x0
    else:
        raise UsageError(f"problem {problem.name!r} has no default x0; pass --x0")
    if len(x0) != problem.n:
        raise UsageError(f"--x0 has {len(x0)} entries but {problem.name!r} has n={problem.n}")
    return np.array(x0, dtype=float)


def _config(args) -> SolveConfig:
    return SolveConfig(
        stop_tol=args.tol,
        max_iter=args.max_iter,
        alpha=args.alpha,
        jacobian_mode=args.jacobian,
        zero_threshold=args.zero_threshold,
        stopping_norm=args.stop_on,
    )


def _write(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")


def _sweep_qs(args, problem: ResidualProblem) -> list[DilationParams]:
    if not args.q:
        raise UsageError("--q needs at least one value")
    return [DilationParams.scalar(q, problem.n) for q in args.q]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_solve(args) -> int:
    problem = _load_problem(args)
    x0 = _x0(args, problem)
    if len(args.q) not in (1, problem.n):
        raise UsageError(f"--q takes 1 or n={problem.n} values, got {len(args.q)}")
    q = DilationParams.coerce(args.q[0] if len(args.q) == 1 else args.q, problem.n)
    result = q_gauss_newton(problem, x0, q, _config(args))
    if args.format == "csv":
        text = report.trace_csv(result, problem.n, problem.m)
    elif args.format == "json":
        text = report.to_json(report.result_to_dict(problem.name, q, result))
    else:
        text = report.trace_table(problem.name, q, result, problem.n, problem.m)
    _write(args, text)
    if result.message:
        print(f"qgn: {result.status.value}: {result.message}", file=sys.stderr)
    return exit_code(result.status)


def run_sweep(problem: ResidualProblem, x0, qs: Sequence[DilationParams], cfg: SolveConfig):
    """One solve per q, in the given order; failures stay in their row."""
    return [(q, q_gauss_newton(problem, x0, q, cfg)) for q in qs]


def _worst(results: Sequence[SolveResult]) -> int:
    return max((exit_code(r.status) for r in results), default=EXIT_OK)


def cmd_sweep(args) -> int:
    problem = _load_problem(args)
    x0 = _x0(args, problem)
    qs = _sweep_qs(args, problem)
    runs = run_sweep(problem, x0, qs, _config(args))
    n, m = problem.n, problem.m

    if args.trace_dir is not None:
        args.trace_dir.mkdir(parents=True, exist_ok=True)
        for q, res in runs:
            path = args.trace_dir / f"{problem.name}_q{q[0]:g}.csv"
            path.write_text(report.trace_csv(res, n, m), encoding="utf-8")

    if args.format == "csv":
        text = report.summary_csv(runs, n, m)
    elif args.format == "json":
        text = report.to_json(
            {"problem": problem.name, "runs": [report.result_to_dict(problem.name, q, r) for q, r in runs]}
        )
    else:
        blocks = [report.trace_table(problem.name, q, r, n, m) for q, r in runs]
        text = "\n".join(blocks) + "\nsummary\n" + report.summary_table(runs, n, m)
    _write(args, text)
    return _worst([r for _, r in runs])


def cmd_compare_nm(args) -> int:
    problem = _load_problem(args)
    if problem.m != 1:
        raise UsageError(
            f"compare-nm needs a scalar problem (m = 1); {problem.name!r} has m = {problem.m} residuals"
        )
    x0 = _x0(args, problem)
    runs = run_sweep(problem, x0, _sweep_qs(args, problem), _config(args))

    if args.nm_objective == "residual":
        def objective(x):
            return problem.evaluate(x)[0]
    else:
        def objective(x):
            r = problem.evaluate(x)[0]
            return 0.5 * r * r
    nm = nelder_mead(objective, x0, SolveConfig(stop_tol=args.nm_tol, max_iter=args.nm_max_iter))

    rows = []
    for q, res in runs:
        fr = res.final_residuals
        rows.append({
            "method": "q-GN", "q": q[0], "status": res.status.value, "iterations": res.iterations,
            "final_x": [float(v) for v in res.final_x],
            "final_value": None if fr is None else float(fr[0]),
        })
    rows.append({
        "method": "Nelder-Mead", "q": None, "status": nm.status.value, "iterations": nm.iterations,
        "final_x": [float(v) for v in nm.final_x], "final_value": float(objective(nm.final_x)),
    })

    if args.format == "csv":
        text = report.comparison_csv(rows)
    elif args.format == "json":
        text = report.to_json({"problem": problem.name, "nm_objective": args.nm_objective, "rows": rows})
    else:
        text = f"problem = {problem.name}  x0 = {', '.join(f'{v:g}' for v in x0)}\n" + report.comparison_table(rows)
    _write(args, text)
    return _worst([r for _, r in runs] + [nm])


def cmd_list(args) -> int:
    for name in sorted(REGISTRY):
        p = get_problem(name)
        x0 = ", ".join(f"{v:g}" for v in p.x0) if p.x0 else "-"
        print(f"{name}  n={p.n} m={p.m} x0=({x0})  {p.description}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "compare-nm": cmd_compare_nm, "list": cmd_list}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, QGNError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qgn: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
