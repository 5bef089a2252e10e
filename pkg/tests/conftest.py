import time

import pytest

from expspline.reproduce import reproduce

_START = time.perf_counter()
_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def table_report():
    """``table_report(table, N=None, dt=None)``, cached for the whole session."""
    cache = {}

    def get(table, N=None, dt=None):
        key = (table, N, dt)
        if key not in cache:
            cache[key] = reproduce(table, N=N, dt=dt)
        return cache[key]

    return get


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(text): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    text = report.user_properties and dict(report.user_properties).get("criterion")
    if text:
        _CRITERIA[report.nodeid] = (text, "PASS" if report.passed else "FAIL")


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker and ("criterion", marker.args[0]) not in item.user_properties:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for text, status in _CRITERIA.values():
        tr.write_line(f"{status}  {text}")
    elapsed = time.perf_counter() - _START
    verdict = "PASS" if elapsed <= 60.0 else "FAIL"
    tr.write_line(f"{verdict}  Property suite time budget: full suite ran in {elapsed:.1f} s (limit 60 s)")
