"""Shared pytest plumbing: the acceptance-criterion reporter.

Acceptance tests call the ``criterion`` fixture to record one verdict line
per criterion; the collected lines are echoed in a terminal section at the
end of the session so the gate's outcome is readable in one block.
"""

import pytest

_criterion_lines = []


@pytest.fixture
def criterion():
    def check(name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" -- {detail}"
        _criterion_lines.append(line)
        print(line)
        assert passed, line

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
