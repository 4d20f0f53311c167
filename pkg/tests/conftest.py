"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

from __future__ import annotations

import pytest

_results: list[tuple[str, str, float, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, limit): acceptance criterion with a runtime limit in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        _results.append((status, marker.args[0], report.duration, marker.kwargs["limit"]))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, took, limit in _results:
        terminalreporter.write_line(f"{status}  {name}  ({took:.2f} s, limit {limit:g} s)")
