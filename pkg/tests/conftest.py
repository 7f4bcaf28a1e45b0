"""Shared pytest plumbing: surface acceptance-criterion verdict lines.

The acceptance tests record one line per criterion; printing them from
inside a test would be swallowed by output capture, so they are replayed
in the terminal summary instead.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
