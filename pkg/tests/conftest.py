import numpy as np
import pytest

# alphabet sizes that cover every degenerate and rounding regime: width 0,
# exact powers of two, one-past, and a width-17 case
SIGMA_GRID = (1, 2, 3, 5, 16, 200, 70000)

# verdict lines recorded by the acceptance gate, replayed after the run so
# they survive output capture in any pytest invocation
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)

# the running example used across the test suite: n=10, sigma=8
EXAMPLE_TEXT = np.array([0, 1, 6, 7, 1, 5, 4, 2, 6, 3], dtype=np.uint8)
EXAMPLE_SIGMA = 8


def dtype_for(sigma: int):
    if sigma <= 1 << 8:
        return np.uint8
    if sigma <= 1 << 16:
        return np.uint16
    return np.uint32


def random_text(rng, n: int, sigma: int) -> np.ndarray:
    if sigma <= 1:
        return np.zeros(n, dtype=np.uint8)
    return rng.integers(0, sigma, n, dtype=dtype_for(sigma))


@pytest.fixture
def rng():
    return np.random.default_rng(0x574C54)
