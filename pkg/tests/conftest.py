import itertools

import pytest

from aekm.channel import FadingParams, choose_n_terms

# representative channel set used for trend and truncation checks
DEFAULT_ALPHA = (1.0, 2.0, 3.0)
DEFAULT_ETA = (0.5, 1.5)
DEFAULT_KAPPA = (1.0, 5.0)
DEFAULT_MU = (0.5, 1.0, 2.0)
DEFAULT_SET = [FadingParams(a, e, k, m) for a, e, k, m in
               itertools.product(DEFAULT_ALPHA, DEFAULT_ETA, DEFAULT_KAPPA, DEFAULT_MU)]
# four-point design spanning the set, used for sweeps
DESIGN = [FadingParams(2, 1, 1, 1), FadingParams(1, 0.5, 5, 0.5),
          FadingParams(3, 1.5, 1, 2), FadingParams(2, 0.5, 5, 2)]
OPERATING = FadingParams(2, 1, 1, 1)
GRID_DB = [2.5 * k for k in range(13)]

_ACCEPTANCE_LINES = []


def db(value):
    return 10.0 ** (value / 10.0)


def n_terms(params, tolerance=1e-6):
    return choose_n_terms(params, tolerance).n_terms


@pytest.fixture
def record():
    """Append a one-line verdict to the acceptance summary."""
    def _record(label, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
