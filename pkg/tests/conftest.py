import math
import sys

import numpy as np
import pytest

from qpassage import make_state

SQ2 = math.sqrt(2.0)


@pytest.fixture
def two_level():
    return make_state([0.0, 1.0], [1.0, 1.0])


@pytest.fixture
def spin1():
    return make_state([-1.0, 0.0, 1.0], [0.5, 1 / SQ2, 0.5])


@pytest.fixture
def family013():
    return make_state([0.0, 1.0, 3.0], [1 / SQ2, 0.5, 0.5])


@pytest.fixture
def family012():
    return make_state([0.0, 1.0, 2.0], [1 / SQ2, 0.5, 0.5])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_phases(rng, n):
    return np.exp(1j * rng.uniform(0, 2 * np.pi, n))


def passage_family_state(rng, min_levels=3, max_levels=5):
    """Random commensurate state whose survival amplitude has a zero.

    The amplitude is a polynomial in z = exp(-i g t) with nonnegative
    coefficients (the level weights). Multiplying a random nonnegative Q(z)
    by (1 + z^a) or (1 + z^a + z^2a) keeps the coefficients nonnegative and
    plants a root on the unit circle.
    """
    while True:
        a = int(rng.integers(1, 4))
        factor = {0: 1.0, a: 1.0}
        if rng.random() < 0.3:
            factor[2 * a] = 1.0
        q_terms = int(rng.integers(1, 4))
        q = {int(e): float(rng.uniform(0.2, 1.0)) for e in rng.integers(0, 5, q_terms)}
        poly: dict[int, float] = {}
        for e1, c1 in factor.items():
            for e2, c2 in q.items():
                poly[e1 + e2] = poly.get(e1 + e2, 0.0) + c1 * c2
        if min_levels <= len(poly) <= max_levels:
            break
    exps = np.array(sorted(poly), dtype=float)
    weights = np.array([poly[int(e)] for e in exps])
    scale = rng.uniform(0.3, 3.0)
    offset = rng.uniform(-5.0, 5.0)
    amps = np.sqrt(weights) * random_phases(rng, len(weights))
    return make_state(offset + scale * exps, amps)


def random_integer_state(rng, max_levels=5):
    """Small-integer spectrum with random weights; generically no passage."""
    n = int(rng.integers(2, max_levels + 1))
    levels = np.sort(rng.choice(np.arange(0, 9), size=n, replace=False)).astype(float)
    amps = rng.uniform(0.1, 1.0, n) * random_phases(rng, n)
    return make_state(levels * rng.uniform(0.3, 3.0) + rng.uniform(-5, 5), amps)


def random_state(rng, n_levels=None):
    n = n_levels or int(rng.integers(2, 6))
    E = np.sort(rng.uniform(-5, 5, n))
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    return make_state(E, amps)


def equal_two_level(rng, gap_range=(0.1, 10.0)):
    e0 = rng.uniform(-5, 5)
    gap = rng.uniform(*gap_range)
    return make_state([e0, e0 + gap], [1.0, np.exp(1j * rng.uniform(0, 2 * np.pi))]), gap


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
