import pytest

# Sampled grid of the (phi, w) plane: rows A..D are w = 1.00, 0.75, 0.50, 0.25,
# columns 1..6 are phi = 0.5, 1.0, ..., 3.0.
GRID_W = {"A": 1.00, "B": 0.75, "C": 0.50, "D": 0.25}
GRID_PHI = {1: 0.50, 2: 1.00, 3: 1.50, 4: 2.00, 5: 2.50, 6: 3.00}
GRID = {f"{row}{col}": (phi, w) for row, w in GRID_W.items() for col, phi in GRID_PHI.items()}

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def grid_points():
    return dict(GRID)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
