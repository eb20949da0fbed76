"""Shared pytest configuration.

Collects the acceptance gate's per-criterion verdict lines and replays them
in the terminal summary, where pytest's output capture cannot hide them.
"""

acceptance_lines: list = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.line(line)
