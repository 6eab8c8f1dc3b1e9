from pathlib import Path

import pytest

from khist.dataset import UCI_MUSHROOM, UCI_VOTING, from_rows, load_csv

DATA = Path(__file__).resolve().parents[1] / "data"
VOTING = DATA / "house-votes-84.data"
MUSHROOM_FULL = DATA / "agaricus-lepiota.data"
MUSHROOM_COMPLETE = DATA / "agaricus-lepiota-complete.data"

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE: dict[str, tuple[str, str]] = {}


def record_acceptance(key: str, ok, detail: str) -> None:
    status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    ACCEPTANCE[key] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0]), s)):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {detail}")


@pytest.fixture(scope="session")
def voting():
    return load_csv(VOTING, UCI_VOTING, name="voting")


@pytest.fixture(scope="session")
def mushroom_complete():
    return load_csv(MUSHROOM_COMPLETE, UCI_MUSHROOM, name="mushroom-complete")


@pytest.fixture(scope="session")
def mushroom(mushroom_complete):
    """The full mushroom file when present, else the bundled complete-case subset."""
    if MUSHROOM_FULL.exists():
        return load_csv(MUSHROOM_FULL, UCI_MUSHROOM, name="mushroom")
    return mushroom_complete


@pytest.fixture
def toy():
    rows = [["a", "x", "p"], ["a", "y", "p"], ["b", "y", "q"], ["b", "x", "q"],
            ["a", "x", "q"], ["b", "y", "p"]]
    return from_rows(rows, labels=["u", "u", "v", "v", "u", "v"], name="toy")
