"""Collects one line per acceptance criterion and prints them at the end of the run."""

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(line)
