import numpy as np
import pytest

from elasticmap import build_set, synth_demos


@pytest.fixture
def announce(capsys):
    """Print an uncaptured pass/fail line, then assert."""

    def _announce(num, desc, ok):
        with capsys.disabled():
            print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {desc}")
        assert ok, f"criterion {num} failed: {desc}"

    return _announce


@pytest.fixture
def scurve_set():
    return build_set(synth_demos("s-curve", 3, 0.02, seed=7))


@pytest.fixture
def line_demo():
    t = np.linspace(0.0, 1.0, 30)
    return np.column_stack([t, 2.0 * t])
