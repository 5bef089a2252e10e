"""Command-line driver: ``run``, ``reproduce`` and ``sweep``.

Examples
--------
::

    expspline run --problem a --lambda 1 --N 80 --dt 0.0001 --snapshots 0.4,0.6,0.8,1.0,3.0
    expspline reproduce 2a
    expspline sweep --problem d --p 0.1 --dt 0.01 --lambda 1,1/2,1/4 --N 16,32,64,128 --t-end 2.25

Settings may also come from a ``key = value`` file passed with ``--config``;
flags given on the command line override the file.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .basis import DomainError
from .oracle import OracleDomainError, SeriesConvergenceError, TangentSingularityError, error_norms
from .problems import PROBLEMS
from .reproduce import TABLE_IDS, format_report, reproduce, write_report
from .solver import Discretization, ProblemSpec, SolverError, run

ORACLE_ERRORS = (OracleDomainError, SeriesConvergenceError, TangentSingularityError)

# decimals printed in the result tables, used by --format table
TABLE_DIGITS = {"a": 5, "b": 6, "c": 3, "d": 9, "custom": 6}

# names visible to --initial / --bc-left / --bc-right / --exact expressions
_EXPR_NAMES = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "log", "sqrt", "tanh", "sinh", "cosh", "abs", "where")
}
_EXPR_NAMES["pi"] = math.pi


class UsageError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def _number(text) -> float:
    """Parse ``0.5``, ``1e-4`` or a fraction such as ``1/32``."""
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def _number_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [_number(v) for v in text]
    return [_number(v) for v in str(text).split(",") if v.strip()]


def _expression(source: str, variables: tuple[str, ...]):
    code = compile(source, "<expression>", "eval")
    bad = [n for n in code.co_names if n not in _EXPR_NAMES and n not in variables]
    if bad:
        raise UsageError(f"unknown name(s) {bad} in expression {source!r}")

    def fn(*args):
        env = dict(zip(variables, args))
        return eval(code, {"__builtins__": {}, **_EXPR_NAMES}, env)

    return fn


@dataclass
class RunConfig:
    problem: str = "a"
    lam: float = 1.0
    N: int = 80
    dt: float = 1e-4
    p: float = 1.0
    t_end: float | None = None
    snapshot_times: list[float] = field(default_factory=list)
    output_dir: str = "out"
    format: str = "csv"
    # custom problem only
    a: float = 0.0
    b: float = 1.0
    t_start: float = 0.0
    initial: str | None = None
    bc_left: str = "0"
    bc_right: str = "0"
    exact: str | None = None

    def validate(self) -> None:
        if self.problem not in (*PROBLEMS, "custom"):
            raise UsageError(f"--problem must be one of a, b, c, d, custom (got {self.problem!r})")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise UsageError(f"--dt must be positive, got {self.dt:g}")
        if int(self.N) != self.N or self.N < 4:
            raise UsageError(f"--N must be an integer >= 4, got {self.N}")
        if not self.p > 0:
            raise UsageError(f"--p must be positive, got {self.p:g}")
        if not self.lam > 0:
            raise UsageError(f"--lambda must be positive, got {self.lam:g}")
        if self.format not in ("csv", "table"):
            raise UsageError("--format must be csv or table")
        if self.problem == "custom" and not self.initial:
            raise UsageError("--problem custom needs --initial")
        if not self.snapshot_times and self.t_end is None:
            raise UsageError("give --snapshots or --t-end")
        if not self.snapshot_times:
            self.snapshot_times = [self.t_end]
        if self.t_end is None:
            self.t_end = max(self.snapshot_times)
        self.snapshot_times = sorted(self.snapshot_times)
        t0 = self.start_time()
        if self.snapshot_times[0] < t0 - 1e-12 or self.snapshot_times[-1] > self.t_end + 1e-12:
            raise UsageError(f"snapshot times must lie in [{t0:g}, {self.t_end:g}]")

    def start_time(self) -> float:
        return {"b": 1.0, "custom": self.t_start}.get(self.problem, 0.0)

    def build_problem(self) -> ProblemSpec:
        if self.problem != "custom":
            return PROBLEMS[self.problem](self.lam)
        exact = _expression(self.exact, ("x", "t")) if self.exact else None
        return ProblemSpec(
            a=self.a,
            b=self.b,
            lam=self.lam,
            initial=_expression(self.initial, ("x",)),
            bc_left=_expression(self.bc_left, ("t",)),
            bc_right=_expression(self.bc_right, ("t",)),
            t_start=self.t_start,
            exact=exact,
            name="custom",
        )

    def discretization(self) -> Discretization:
        return Discretization(int(self.N), self.dt, self.p)


@dataclass(frozen=True)
class SnapshotResult:
    time: float
    x: np.ndarray
    numeric: np.ndarray
    exact: np.ndarray | None
    l2: float | None
    linf: float | None


def solve_case(config: RunConfig) -> list[SnapshotResult]:
    """Run one configuration and compare with the oracle where one exists.

    Raises
    ------
    StageError
        With ``stage`` set to ``"setup"``, ``"fit"``, ``"step k"`` or ``"oracle"``.
    """
    try:
        problem = config.build_problem()
        disc = config.discretization()
        disc.basis(problem)
    except (ValueError, DomainError) as exc:
        raise StageError("setup", str(exc)) from exc
    try:
        snaps = run(problem, disc, config.snapshot_times)
    except SolverError as exc:
        stage = f"step {exc.step_index}" if hasattr(exc, "step_index") else exc.stage
        raise StageError(stage, str(exc)) from exc
    except ORACLE_ERRORS as exc:  # raised by initial or boundary data built on an oracle
        raise StageError("fit", str(exc)) from exc
    mesh = disc.mesh(problem)
    out = []
    for s in snaps:
        if problem.exact is None:
            out.append(SnapshotResult(s.time, mesh, s.state.u, None, None, None))
            continue
        try:
            er = error_norms(s.state, problem.exact, mesh, s.time)
        except (*ORACLE_ERRORS, ValueError, ArithmeticError) as exc:
            raise StageError("oracle", f"t={s.time:g}: {exc}") from exc
        out.append(SnapshotResult(s.time, mesh, er.numeric, er.exact, er.l2, er.linf))
    return out


def _g(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_table(path: Path, header, rows, digits: int) -> str:
    def cell(v):
        if v is None or v == "":
            return "-"
        return f"{float(v):.{digits}f}"

    body = [[cell(v) for v in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in body]
    text = "\n".join(lines) + "\n"
    path.write_text(text)
    return text


def write_outputs(config: RunConfig, results: list[SnapshotResult]) -> list[Path]:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    digits = TABLE_DIGITS[config.problem]
    ext = "csv" if config.format == "csv" else "txt"
    for k, r in enumerate(results):
        if r.exact is None:
            rows = [(x, u, None, None) for x, u in zip(r.x, r.numeric)]
        else:
            rows = list(zip(r.x, r.numeric, r.exact, np.abs(r.numeric - r.exact)))
        path = out / f"profile_{k:03d}_t{r.time:.6g}.{ext}"
        header = ["x", "numeric", "exact", "abs_error"]
        if config.format == "csv":
            _write_csv(path, header, [[_g(v) for v in row] for row in rows])
        else:
            _write_table(path, header, rows, digits)
        paths.append(path)
    summary = out / f"summary.{ext}"
    srows = [(r.time, r.l2, r.linf) for r in results]
    if config.format == "csv":
        _write_csv(summary, ["time", "l2", "linf"], [[_g(v) for v in row] for row in srows])
    else:
        _write_table(summary, ["time", "l2", "linf"], srows, max(digits, 9))
    paths.append(summary)
    return paths


def run_case(config: RunConfig) -> int:
    """Solve, write the files and return an exit status."""
    config.validate()
    try:
        results = solve_case(config)
    except StageError as exc:
        print(f"error in stage {exc.stage}: {exc}", file=sys.stderr)
        return 1
    paths = write_outputs(config, results)
    for r in results:
        l2 = "n/a" if r.l2 is None else f"{r.l2:.6e}"
        linf = "n/a" if r.linf is None else f"{r.linf:.6e}"
        print(f"t={r.time:.10g}  L2={l2}  Linf={linf}")
    print(f"wrote {len(paths)} file(s) to {config.output_dir}")
    return 0


# ---------------------------------------------------------------- sweep

SWEEP_FIELDS = ["problem", "lambda", "N", "dt", "p", "t", "l2", "linf", "status", "error"]


def _sweep_cell(args: tuple[RunConfig, float, int, float, float]) -> list[str]:
    base, lam, N, dt, p = args
    cfg = RunConfig(**{**base.__dict__, "lam": lam, "N": N, "dt": dt, "p": p})
    cfg.snapshot_times = [base.t_end]
    row = [cfg.problem, _g(lam), str(N), _g(dt), _g(p), _g(base.t_end)]
    try:
        cfg.validate()
        res = solve_case(cfg)[-1]
    except (StageError, UsageError) as exc:
        return row + ["", "", "failed", str(exc)]
    if res.l2 is None:
        return row + ["", "", "no-oracle", ""]
    return row + [_g(res.l2), _g(res.linf), "ok", ""]


def sweep(base: RunConfig, lams, Ns, dts, ps, workers: int = 1) -> list[list[str]]:
    """One row per grid point, in ``lambda, N, dt, p`` nesting order."""
    if base.t_end is None:
        raise UsageError("sweep needs --t-end")
    grid = [(base, lam, int(N), dt, p) for lam, N, dt, p in itertools.product(lams, Ns, dts, ps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_cell, grid))
    return [_sweep_cell(g) for g in grid]


# ---------------------------------------------------------------- parsing

_KEYS = {
    "problem": str, "lambda": _number, "N": lambda v: int(_number(v)), "dt": _number, "p": _number,
    "t_end": _number, "snapshots": _number_list, "out": str, "format": str,
    "a": _number, "b": _number, "t_start": _number, "initial": str, "bc_left": str,
    "bc_right": str, "exact": str, "workers": lambda v: int(_number(v)),
}


def _read_config(path: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep "N" distinct from "n"
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    parser.read_string("[run]\n" + text)
    values = {}
    for key, raw in parser["run"].items():
        k = key.replace("-", "_")
        if k == "lam":
            k = "lambda"
        if k not in _KEYS:
            raise UsageError(f"unknown config key {key!r}")
        values[k] = raw
    return values


def _merge(args: argparse.Namespace, list_keys=()) -> dict:
    """Config-file values overlaid with the flags given on the command line."""
    values = _read_config(args.config) if getattr(args, "config", None) else {}
    for k in _KEYS:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    out = {}
    for k, v in values.items():
        if k in list_keys:
            out[k] = _number_list(v)
        elif isinstance(v, str):
            out[k] = _KEYS[k](v)
        else:
            out[k] = v
    return out


def _config_from(values: dict) -> RunConfig:
    cfg = RunConfig()
    mapping = {"lambda": "lam", "snapshots": "snapshot_times", "out": "output_dir"}
    for k, v in values.items():
        if k == "workers":
            continue
        setattr(cfg, mapping.get(k, k), v)
    return cfg


def _add_case_flags(sp: argparse.ArgumentParser, lists: bool = False) -> None:
    kind = str if lists else None
    sp.add_argument("--config", help="key = value file; command-line flags override it")
    sp.add_argument("--problem", choices=["a", "b", "c", "d", "custom"])
    sp.add_argument("--lambda", dest="lambda", type=kind or str, help="viscosity" + (" (comma list)" if lists else ""))
    sp.add_argument("--N", type=kind or str, help="number of intervals" + (" (comma list)" if lists else ""))
    sp.add_argument("--dt", type=kind or str, help="time step" + (" (comma list)" if lists else ""))
    sp.add_argument("--p", type=kind or str, help="tension parameter" + (" (comma list)" if lists else ""))
    sp.add_argument("--t-end", dest="t_end", type=str)
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--format", choices=["csv", "table"])
    sp.add_argument("--a", type=str, help="custom problem: left end")
    sp.add_argument("--b", type=str, help="custom problem: right end")
    sp.add_argument("--t-start", dest="t_start", type=str, help="custom problem: start time")
    sp.add_argument("--initial", help="custom problem: U(x, t_start) as an expression in x")
    sp.add_argument("--bc-left", dest="bc_left", help="custom problem: left value, expression in t")
    sp.add_argument("--bc-right", dest="bc_right", help="custom problem: right value, expression in t")
    sp.add_argument("--exact", help="custom problem: exact solution, expression in x and t")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expspline", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("run", help="solve one case and write profiles plus a summary")
    _add_case_flags(rp)
    rp.add_argument("--snapshots", help="comma-separated output times")

    tp = sub.add_parser("reproduce", help="re-run a result table and compare with the printed values")
    tp.add_argument("table", choices=TABLE_IDS)
    tp.add_argument("--N", type=int, help="override the interval count")
    tp.add_argument("--dt", type=str, help="override the time step")
    tp.add_argument("--out", default="out", help="output directory")

    sp = sub.add_parser("sweep", help="error norms over a grid of (lambda, N, dt, p)")
    _add_case_flags(sp, lists=True)
    sp.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    return parser


def _cmd_run(args) -> int:
    cfg = _config_from(_merge(args, list_keys=("snapshots",)))
    return run_case(cfg)


def _cmd_reproduce(args) -> int:
    dt = _number(args.dt) if args.dt is not None else None
    if dt is not None and not dt > 0:
        raise UsageError(f"--dt must be positive, got {dt:g}")
    report = reproduce(args.table, N=args.N, dt=dt)
    path = write_report(report, Path(args.out) / f"report_{args.table}.csv")
    print(format_report(report))
    print(f"report written to {path}")
    if not report.passed:
        print(f"table {args.table}: {len(report.failures())} failure(s)", file=sys.stderr)
        for line in report.failures():
            print(f"  {line}", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    values = _merge(args, list_keys=("lambda", "N", "dt", "p"))
    workers = int(values.pop("workers", 1))
    grid = {k: values.pop(k, None) for k in ("lambda", "N", "dt", "p")}
    base = _config_from(values)
    lams = grid["lambda"] or [base.lam]
    Ns = grid["N"] or [base.N]
    dts = grid["dt"] or [base.dt]
    ps = grid["p"] or [base.p]
    for dt in dts:
        if not dt > 0:
            raise UsageError(f"--dt must be positive, got {dt:g}")
    rows = sweep(base, lams, Ns, dts, ps, workers)
    out = Path(base.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    _write_csv(path, SWEEP_FIELDS, rows)
    failed = sum(r[8] == "failed" for r in rows)
    print(f"{len(rows)} row(s), {failed} failed; written to {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": _cmd_run, "reproduce": _cmd_reproduce, "sweep": _cmd_sweep}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"expspline {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
