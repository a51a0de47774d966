import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_report import LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
