"""One test per acceptance criterion, at the stated tolerance.

A summary block with one PASS/FAIL line per criterion is printed at the end
of the run (see ``conftest.py``).
"""

import pytest

from expspline.reproduce import refinement_check

import test_basis
import test_linalg
import test_oracle
import test_solver


@pytest.mark.criterion("Table 2a: lambda=1, N=80, dt=1e-4, p=1; 15 cells within 2e-5; runtime <= 10 s")
def test_table_2a(table_report):
    rep = table_report("2a")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 2b: lambda=0.1, N=40, dt=1e-4; 15 cells within 2e-5")
def test_table_2b(table_report):
    rep = table_report("2b")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 2c: lambda=0.01, N=40, dt=1e-4; 14 of 15 cells within 2e-5 (flagged row excluded)")
def test_table_2c(table_report):
    rep = table_report("2c")
    assert sum(c.enforced for c in rep.cells) == 14
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Tables 3a/3b: lambda=1, t=0.1, four h; cells within 3e-5; refinement error monotone")
def test_tables_3a_3b(table_report):
    a, b = table_report("3a"), table_report("3b")
    bad = [c for c in a.cells + b.cells if not c.passed]
    assert not bad, [f"{c.row} {c.column}: {c.abs_diff:.2e}" for c in bad]
    errors = {**a.extra["max_error_vs_exact_column"], **b.extra["max_error_vs_exact_column"]}
    assert len(errors) == 4
    check = refinement_check(errors)
    assert check.passed, check.detail


@pytest.mark.criterion("Table 4: lambda=0.0005, h=0.005, dt=0.01; cells within 5e-5, two shock cells within 2e-3")
def test_table_4(table_report):
    rep = table_report("4")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 5: lambda=0.005; L2 and Linf (x1e3) at t=1.7, 2.4, 3.1 within a factor of 2")
def test_table_5(table_report):
    rep = table_report("5")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 6: travelling wave, h=1/36, t=0.5; 19 values to 3 decimals, <= 2 one-unit misses")
def test_table_6(table_report):
    rep = table_report("6")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 7: lambda=1/1000, h=0.00625, dt=0.015, p=1; >= 9 of 11 rows within 5e-9")
def test_table_7(table_report):
    rep = table_report("7")
    assert rep.passed, rep.failures()


@pytest.mark.criterion("Table 8: p=0.1, dt=0.01; 7x4 max errors within a factor of 3, rows monotone in N")
def test_table_8(table_report):
    rep = table_report("8")
    assert rep.passed, rep.failures()


@pytest.mark.criterion(
    "Property suite: basis identities and smoothness, Thomas vs dense, N=4 brute force, "
    "time-refinement ratio, PDE residuals, Bessel recurrence"
)
def test_property_suite():
    test_basis.test_nodal_consistency_random()
    test_basis.test_stencil_symmetries()
    test_basis.test_smoothness_across_knots()
    test_basis.test_cubic_limit()
    test_linalg.test_thomas_matches_dense_on_random_systems()
    test_solver.test_matches_brute_force_dense_system()
    test_solver.test_time_refinement_ratio()
    test_solver.test_linear_regime_is_second_order()
    for lam in (0.1, 0.05):
        test_oracle.test_exact_b_residual(lam)
        test_oracle.test_exact_c_residual(lam)
    for lam in (0.1, 0.01):
        test_oracle.test_exact_d_residual(lam)
    for z in (0.5, 1.59, 15.9):
        test_oracle.test_bessel_recurrence(z)
