import re

_CRITERIA: dict[int, tuple[str, str]] = {}
_PATTERN = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    n, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        passed = report.outcome == "passed" and not hasattr(report, "wasxfail")
        if hasattr(report, "wasxfail"):
            label += " (known failure: %s)" % report.wasxfail
        _CRITERIA[n] = ("PASS" if passed else "FAIL", label)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, label = _CRITERIA[n]
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, status, label))
