import numpy as np
import pytest
from hypothesis import settings

from rational_curiosity import GrowthModel

# fixed example sequence so repeated runs of the suite agree
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@pytest.fixture
def unit_growth():
    return GrowthModel(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def finite_difference(f, h, k, step=1e-5):
    """Central difference of ``f`` with respect to ``h[k]``."""
    hp, hm = np.array(h, dtype=float), np.array(h, dtype=float)
    hp[k] += step
    hm[k] -= step
    return (f(hp) - f(hm)) / (2 * step)


def grid_argmax(f, lo, hi, step=1e-4):
    """Brute-force maximizer of ``f`` on an evenly spaced grid."""
    n = int(round((hi - lo) / step)) + 1
    xs = [lo + i * step for i in range(n)]
    best = max(range(n), key=lambda i: f(xs[i]))
    return xs[best]


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Report one acceptance criterion: prints a PASS/FAIL line, then asserts."""
    def report(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" :: {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
