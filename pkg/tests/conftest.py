import re

CRITERION_PATTERN = re.compile(r"test_criterion_(\d+)_(\w+)")

_results: dict[str, tuple[int, str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = CRITERION_PATTERN.search(report.nodeid)
    if not match:
        return
    number = int(match.group(1))
    name = match.group(2).replace("_", " ")
    outcome = "PASS" if report.passed else "FAIL"
    _results[report.nodeid] = (number, name, outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, outcome in sorted(_results.values()):
        terminalreporter.write_line(
            f"criterion {number:2d} [{outcome}] {name}")
