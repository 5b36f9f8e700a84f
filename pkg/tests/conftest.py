"""Summarize the acceptance-gate outcomes, one line per criterion."""

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    marker = "test_acceptance.py::test_criterion_"
    if marker not in report.nodeid:
        return
    num = report.nodeid.split("test_criterion_")[1].split("[")[0].split("_")[0]
    previous = _CRITERIA.get(num, True)
    _CRITERIA[num] = previous and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA, key=int):
        status = "PASS" if _CRITERIA[num] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}")
