import sys
from pathlib import Path

# Lets tests import the golden-file generators from scripts/.
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
