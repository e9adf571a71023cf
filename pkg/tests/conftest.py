import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qbs.market_data import bundled_path  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE = []


@pytest.fixture
def aal_paths():
    d = bundled_path("aal")
    return {"stock": d / "stock.csv", "vix": d / "vix.csv", "option": d / "option.csv"}


@pytest.fixture
def aal_args(aal_paths):
    return ["--ticker", "AAL", "--strike", "13", "--issue", "2020-10-08",
            "--expiry", "2020-11-20", "--stock", str(aal_paths["stock"]),
            "--vix", str(aal_paths["vix"])]


@pytest.fixture
def acceptance_report():
    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
