import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.REPORTED:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORTED:
            terminalreporter.write_line(line)
