import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csrecover import BENCHMARK_SIGNAL, build_dictionary, draw_mask, generate_multitone, sample  # noqa: E402


@pytest.fixture(scope="session")
def five_tone_x():
    return generate_multitone(BENCHMARK_SIGNAL)


@pytest.fixture
def five_tone_case(five_tone_x):
    """Five-tone signal sampled at 60 seeded instants."""
    mask = draw_mask(512, 60, 7)
    return five_tone_x, sample(five_tone_x, mask), build_dictionary(512, mask, normalize=True)


@pytest.fixture
def crng():
    rng = np.random.default_rng(1234)

    def draw(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    return draw


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one acceptance line; returns the flag so tests can assert on it."""

    def report(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
