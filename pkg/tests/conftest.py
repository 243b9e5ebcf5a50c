import re

_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = re.search(r"test_acceptance\.py::test_(c\d+)_(\w+)", report.nodeid)
    if match:
        _ACCEPTANCE_RESULTS[(match.group(1), match.group(2))] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for (crit, name), outcome in sorted(_ACCEPTANCE_RESULTS.items()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"[acceptance] criterion {int(crit[1:])} ({name}): {status}"
        )
