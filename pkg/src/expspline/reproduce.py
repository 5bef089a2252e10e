"""Re-run the benchmark tables and compare with the embedded reference values.

Every table runs with the parameters printed in its caption. Cells carry
their provenance (table id, row label, column key) from
``data/reference_tables.json``. The tolerance for each table is the one
used by the acceptance suite; cells that are reported but not enforced
have ``enforced=False``.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .oracle import error_norms
from .problems import problem_a, problem_b, problem_c, problem_d
from .solver import Discretization, ProblemSpec, Snapshot, run

TABLE_IDS = ("2a", "2b", "2c", "3a", "3b", "4", "5", "6", "7", "8")


@dataclass(frozen=True)
class CellResult:
    table: str
    row: str
    column: str
    reference: float
    computed: float
    tolerance: float
    passed: bool
    enforced: bool = True
    x: float | None = None
    t: float | None = None
    note: str = ""

    @property
    def abs_diff(self) -> float:
        return abs(self.computed - self.reference)


@dataclass(frozen=True)
class Check:
    """A table-level condition that is not a single-cell comparison."""

    name: str
    passed: bool
    detail: str = ""
    enforced: bool = True


@dataclass
class TableReport:
    table: str
    params: dict
    cells: list[CellResult] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.enforced)

    def failures(self) -> list[str]:
        out = [f"{c.name}: {c.detail}" for c in self.checks if c.enforced and not c.passed]
        for c in self.cells:
            if not c.enforced or c.passed:
                continue
            head = f"cell {c.row} [{c.column}]: computed {c.computed:.9g}, reference {c.reference:.9g}, "
            if "band" in c.note:
                out.append(head + f"ratio {c.computed / c.reference:.3g} outside the {c.note}")
            else:
                out.append(head + f"|diff| {c.abs_diff:.3g} > {c.tolerance:.3g}")
        return out


@lru_cache(maxsize=1)
def _reference() -> dict:
    text = resources.files("expspline").joinpath("data/reference_tables.json").read_text()
    return json.loads(text)["tables"]


def reference_table(table: str) -> dict:
    """Printed values and parameters of one table (a deep copy is not made)."""
    try:
        return _reference()[table]
    except KeyError:
        raise KeyError(f"unknown table {table!r}; choose from {', '.join(TABLE_IDS)}") from None


def _nodal(snap: Snapshot, problem: ProblemSpec, disc: Discretization, x: float) -> float:
    h = disc.spacing(problem)
    k = (x - problem.a) / h
    i = int(round(k))
    if abs(k - i) > 1e-6:
        raise ValueError(f"x={x} is not a mesh node for N={disc.N}")
    return float(snap.state.u[i])


def _cells_by_time(ref: dict, column: str):
    times: dict[float, list[dict]] = {}
    for cell in ref["cells"]:
        if cell["column"] == column:
            times.setdefault(cell["t"], []).append(cell)
    return times


def _compare(table, cell, computed, tol, enforced=True, note=""):
    ref = cell["value"]
    return CellResult(
        table=table,
        row=cell["row"],
        column=cell["column"],
        reference=ref,
        computed=computed,
        tolerance=tol,
        passed=abs(computed - ref) <= tol,
        enforced=enforced,
        x=cell.get("x"),
        t=cell.get("t"),
        note=note or cell.get("flag", ""),
    )


def _count_check(name, cells, need):
    ok = sum(c.passed for c in cells)
    return Check(name, ok >= need, f"{ok} of {len(cells)} within tolerance (need {need})")


def _table2(table: str, N: int | None = None, dt: float | None = None) -> TableReport:
    ref = reference_table(table)
    N = N or ref["N"]
    dt = dt or ref["dt"]
    problem = problem_a(ref["lambda"])
    disc = Discretization(N, dt, ref["p"])
    by_t = _cells_by_time(ref, "present")
    times = sorted(by_t)
    t0 = time.perf_counter()
    snaps = dict(zip(times, run(problem, disc, times)))
    elapsed = time.perf_counter() - t0

    report = TableReport(table, {"problem": "a", "lambda": ref["lambda"], "N": N, "dt": dt, "p": ref["p"]})
    report.extra["runtime_s"] = elapsed
    for t in times:
        for cell in by_t[t]:
            excluded = "flag" in _row_cells(ref, cell["row"])
            report.cells.append(
                _compare(table, cell, _nodal(snaps[t], problem, disc, cell["x"]), 2e-5, not excluded)
            )
    enforced = [c for c in report.cells if c.enforced]
    report.checks.append(_count_check("present column within 2e-5", enforced, len(enforced)))
    if table == "2a":
        report.checks.append(Check("runtime <= 10 s", elapsed <= 10.0, f"{elapsed:.2f} s"))
    return report


def _row_cells(ref: dict, row: str) -> dict:
    """Merge the flags of every cell in a row (used to exclude a whole row)."""
    merged: dict = {}
    for cell in ref["cells"]:
        if cell["row"] == row:
            merged.update({k: v for k, v in cell.items() if k == "flag"})
    return merged


def _table3(table: str, dt: float | None = None) -> TableReport:
    ref = reference_table(table)
    dt = dt or ref["dt"]
    problem = problem_a(ref["lambda"])
    exact_col = {c["x"]: c["value"] for c in ref["cells"] if c["column"] == "exact"}
    report = TableReport(table, {"problem": "a", "lambda": ref["lambda"], "h": ref["h"], "dt": dt, "p": ref["p"]})
    errors = {}
    for h in ref["h"]:
        N = int(round(1.0 / h))
        disc = Discretization(N, dt, ref["p"])
        snap = run(problem, disc, [0.1])[0]
        err = 0.0
        for cell in ref["cells"]:
            if cell.get("h") != h:
                continue
            u = _nodal(snap, problem, disc, cell["x"])
            report.cells.append(_compare(table, cell, u, 3e-5))
            err = max(err, abs(u - exact_col[cell["x"]]))
        errors[h] = err
    report.extra["max_error_vs_exact_column"] = errors
    report.checks.append(_count_check("present columns within 3e-5", report.cells, len(report.cells)))
    report.checks.append(refinement_check(errors))
    return report


def refinement_check(errors: dict[float, float]) -> Check:
    """Error against the exact column must not grow as ``h`` shrinks."""
    hs = sorted(errors, reverse=True)
    seq = [errors[h] for h in hs]
    ok = all(b <= a for a, b in zip(seq, seq[1:]))
    detail = ", ".join(f"h={h:g}: {e:.2e}" for h, e in zip(hs, seq))
    return Check("h-refinement error monotone nonincreasing", ok, detail)


def _table4(N: int | None = None, dt: float | None = None) -> TableReport:
    ref = reference_table("4")
    N = N or ref["N"]
    dt = dt or ref["dt"]
    problem = problem_b(ref["lambda"])
    disc = Discretization(N, dt, ref["p"])
    by_t = _cells_by_time(ref, "present")
    times = sorted(by_t)
    snaps = dict(zip(times, run(problem, disc, times)))
    report = TableReport("4", {"problem": "b", "lambda": ref["lambda"], "N": N, "dt": dt, "p": ref["p"]})
    for t in times:
        for cell in by_t[t]:
            tol = 2e-3 if cell.get("shock_interior") else 5e-5
            report.cells.append(_compare("4", cell, _nodal(snaps[t], problem, disc, cell["x"]), tol))
    report.checks.append(_count_check("present column within tolerance", report.cells, len(report.cells)))
    return report


def _table5(N: int | None = None, dt: float | None = None) -> TableReport:
    ref = reference_table("5")
    N = N or ref["N"]
    dt = dt or ref["dt"]
    problem = problem_b(ref["lambda"])
    disc = Discretization(N, dt, ref["p"])
    times = sorted({c["t"] for c in ref["cells"]})
    snaps = dict(zip(times, run(problem, disc, times)))
    mesh = disc.mesh(problem)
    report = TableReport("5", {"problem": "b", "lambda": ref["lambda"], "N": N, "dt": dt, "p": ref["p"]})
    norm_cells = []
    for cell in ref["cells"]:
        if cell["column"] != "present":
            continue
        t = cell["t"]
        if "norm" in cell:
            er = error_norms(snaps[t].state, problem.exact, mesh, snaps[t].time)
            value = 1e3 * (er.l2 if cell["norm"] == "l2" else er.linf)
            ref_v = cell["value"]
            ok = ref_v / 2.0 <= value <= 2.0 * ref_v
            res = CellResult(
                "5", cell["row"], cell["column"], ref_v, value, ref_v, ok, True, None, t,
                "factor-2 band on the scaled norm",
            )
            norm_cells.append(res)
            report.cells.append(res)
        else:
            u = _nodal(snaps[t], problem, disc, cell["x"])
            report.cells.append(_compare("5", cell, u, 5e-5, enforced=False, note="nodal value, reported only"))
    report.checks.append(_count_check("norms within a factor of 2", norm_cells, len(norm_cells)))
    return report


def _table6(N: int | None = None, dt: float | None = None) -> TableReport:
    ref = reference_table("6")
    N = N or ref["N"]
    dts = [dt] if dt else list(ref["dt"])
    problem = problem_c(ref["lambda"])
    cells = [c for c in ref["cells"] if c["column"] == "present"]
    report = TableReport("6", {"problem": "c", "lambda": ref["lambda"], "N": N, "dt": dts, "p": ref["p"]})
    per_dt = []
    for step_dt in dts:
        disc = Discretization(N, step_dt, ref["p"])
        snap = run(problem, disc, [0.5])[0]
        results = []
        for cell in cells:
            # printed x is rounded to 3 decimals; the stored node index is exact
            u = float(snap.state.u[cell["node"] * N // ref["N"]])
            units = int(round(abs(round(u, 3) - cell["value"]) * 1000))
            res = CellResult(
                "6", cell["row"], f"present@dt={step_dt:g}", cell["value"], u, 1e-3, units <= 1,
                True, cell["x"], 0.5, f"{units} unit(s) off in the third decimal",
            )
            results.append((res, units))
        report.cells.extend(r for r, _ in results)
        off_one = sum(u == 1 for _, u in results)
        worse = sum(u > 1 for _, u in results)
        ok = worse == 0 and off_one <= 2
        per_dt.append(ok)
        report.checks.append(
            Check(f"dt={step_dt:g}: 3-decimal match", ok, f"{off_one} cell(s) one unit off, {worse} worse", False)
        )
    # the cell rows are informative; the verdict is "pass under either dt"
    report.cells = [replace(c, enforced=False) for c in report.cells]
    report.checks.append(Check("3-decimal match under at least one dt", any(per_dt), str(dict(zip(dts, per_dt)))))
    return report


def _table7(N: int | None = None, dt: float | None = None) -> TableReport:
    ref = reference_table("7")
    N = N or ref["N"]
    dt = dt or ref["dt"]
    problem = problem_d(ref["lambda"])
    report = TableReport("7", {"problem": "d", "lambda": ref["lambda"], "N": N, "dt": dt, "p": ref["p"]})
    p1_cells = []
    for p in ref["p"]:
        column = f"present_p{p:g}"
        cells = [c for c in ref["cells"] if c["column"] == column]
        try:
            disc = Discretization(N, dt, p)
            snap = run(problem, disc, [2.25])[0]
        except ValueError as exc:  # basis domain error, e.g. p*h below the supported range
            report.checks.append(Check(f"{column} not computed", False, str(exc), False))
            continue
        for cell in cells:
            u = _nodal(snap, problem, disc, cell["x"])
            enforced = p == 1.0
            res = _compare("7", cell, u, 5e-9, enforced=enforced)
            report.cells.append(res)
            if enforced:
                p1_cells.append(res)
    report.checks.append(_count_check("p=1 column within 5e-9", p1_cells, 9))
    return report


def table8_grid() -> tuple[list[float], list[int]]:
    ref = reference_table("8")
    lams = []
    for c in ref["cells"]:
        if c["lambda"] not in lams:
            lams.append(c["lambda"])
    return lams, sorted({c["N"] for c in ref["cells"]})


def max_error_d(lam: float, N: int, dt: float, p: float, t: float = 2.25) -> float:
    """Largest nodal error of problem (d) at time ``t``."""
    problem = problem_d(lam)
    disc = Discretization(N, dt, p)
    snap = run(problem, disc, [t])[0]
    return error_norms(snap.state, problem.exact, disc.mesh(problem), snap.time).linf


def _table8(N: int | None = None, dt: float | None = None) -> TableReport:
    if N is not None:
        raise ValueError("table 8 spans several N; an N override does not apply")
    ref = reference_table("8")
    dt = dt or ref["dt"]
    report = TableReport("8", {"problem": "d", "dt": dt, "p": ref["p"]})
    rows: dict[str, list[tuple[int, float]]] = {}
    for cell in ref["cells"]:
        err = max_error_d(cell["lambda"], cell["N"], dt, ref["p"])
        ref_v = cell["value"]
        ok = ref_v / 3.0 <= err <= 3.0 * ref_v
        report.cells.append(
            CellResult("8", cell["row"], cell["column"], ref_v, err, ref_v, ok, True, None, 2.25, "factor-3 band")
        )
        rows.setdefault(cell["row"], []).append((cell["N"], err))
    report.checks.append(_count_check("cells within a factor of 3", report.cells, len(report.cells)))
    bad = []
    for row, vals in rows.items():
        seq = [e for _, e in sorted(vals)]
        if any(b > a for a, b in zip(seq, seq[1:])):
            bad.append(row)
    report.checks.append(
        Check("rows monotone nonincreasing in N", not bad, "non-monotone: " + ", ".join(bad) if bad else "all rows")
    )
    return report


def reproduce(table: str, N: int | None = None, dt: float | None = None) -> TableReport:
    """Run one table with its printed parameters (``N``/``dt`` override them)."""
    table = str(table).lower()
    if table in ("2a", "2b", "2c"):
        return _table2(table, N, dt)
    if table in ("3a", "3b"):
        if N is not None:
            raise ValueError(f"table {table} spans several h; an N override does not apply")
        return _table3(table, dt)
    runners = {"4": _table4, "5": _table5, "6": _table6, "7": _table7, "8": _table8}
    if table not in runners:
        raise KeyError(f"unknown table {table!r}; choose from {', '.join(TABLE_IDS)}")
    return runners[table](N, dt)


REPORT_FIELDS = [
    "table", "row", "column", "x", "t", "reference", "computed", "abs_diff",
    "tolerance", "enforced", "status", "note",
]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_report(report: TableReport, path) -> Path:
    """Write the per-cell CSV; table-level checks go to ``<stem>_checks.csv``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        for c in report.cells:
            w.writerow([
                c.table, c.row, c.column, _fmt(c.x), _fmt(c.t), _fmt(c.reference), _fmt(c.computed),
                _fmt(c.abs_diff), _fmt(c.tolerance), int(c.enforced),
                "pass" if c.passed else "FAIL", c.note,
            ])
    checks = path.with_name(path.stem + "_checks.csv")
    with checks.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["table", "check", "enforced", "status", "detail"])
        for c in report.checks:
            w.writerow([report.table, c.name, int(c.enforced), "pass" if c.passed else "FAIL", c.detail])
    return path


def format_report(report: TableReport) -> str:
    lines = [f"table {report.table}: " + ", ".join(f"{k}={v}" for k, v in report.params.items())]
    width = max((len(c.row) for c in report.cells), default=4)
    for c in report.cells:
        mark = "ok " if c.passed else ("FAIL" if c.enforced else "off")
        lines.append(
            f"  {c.row:<{width}}  {c.column:<16} ref {c.reference:<12.9g} got {c.computed:<14.9g} "
            f"|d| {c.abs_diff:.2e}  {mark}"
        )
    for c in report.checks:
        tag = "PASS" if c.passed else ("FAIL" if c.enforced else "info")
        lines.append(f"  [{tag}] {c.name}: {c.detail}")
    lines.append(f"table {report.table}: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines)

