import _acceptance_log


def pytest_terminal_summary(terminalreporter):
    lines = _acceptance_log.LINES
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=_acceptance_log.order):
        terminalreporter.write_line(line)
