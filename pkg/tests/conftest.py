import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

_ACCEPTANCE: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion[" not in report.nodeid:
        return
    label = report.nodeid.split("[", 1)[1].rstrip("]")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[label] = (report.outcome.upper(), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE):
        outcome, duration = _ACCEPTANCE[label]
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        number, _, title = label.partition("-")
        terminalreporter.write_line(f"criterion {int(number):2d} {title.replace('-', ' '):28s} {verdict} ({duration:.1f}s)")
