"""Criterion reporter for the plotting acceptance tests.

Mirrors the simulator suite's fixture: each acceptance check records one
``[PASS]``/``[FAIL]`` line, echoed in a terminal section at session end.
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
        terminalreporter.section("secondary acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
