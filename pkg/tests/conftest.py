import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def three_class_csv(tmp_path):
    """Small labelled CSV with header and three well-separated classes."""
    rng = np.random.default_rng(0)
    centres = {"a": (0, 0, 0), "b": (6, 0, 0), "c": (0, 6, 3)}
    rows = ["f1,f2,f3,label"]
    for name, c in centres.items():
        for x in rng.normal(size=(30, 3)) + c:
            rows.append(",".join(f"{v:.6f}" for v in x) + f",{name}")
    path = tmp_path / "data.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
