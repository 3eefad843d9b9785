import numpy as np
import pytest

from predgame import Constant, EmpiricalGame, FiniteList, Linear, Sample

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_sample(rng, m, n=1, digits=2):
    X = np.round(rng.uniform(-2, 2, (m, n)), digits)
    y = np.round(rng.uniform(-2, 2, m), digits)
    t = np.round(rng.uniform(0, 1, m), digits)
    return Sample.from_arrays(X, y, t)


def random_member(rng, n=1, digits=2):
    if rng.random() < 0.4:
        return Constant(float(np.round(rng.uniform(-2, 2), digits)))
    return Linear(tuple(float(v) for v in np.round(rng.uniform(-2, 2, n), digits)),
                  float(np.round(rng.uniform(-1, 1), digits)))


def random_finite_game(rng, max_N=5, max_K=6, max_m=30, mode="floating", n=1):
    """Random finite game whose members all differ on the sample."""
    N = int(rng.integers(1, max_N + 1))
    m = int(rng.integers(1, max_m + 1))
    sample = random_sample(rng, m, n)
    classes = []
    for _ in range(N):
        K = int(rng.integers(1, max_K + 1))
        members, seen = [], set()
        for _ in range(50 * K):
            h = random_member(rng, n)
            key = tuple(np.round(h.predict(sample.X), 12))
            if key not in seen:
                seen.add(key)
                members.append(h)
            if len(members) == K:
                break
        classes.append(FiniteList(tuple(members), declared_pdim=2))
    return EmpiricalGame(sample, classes, mode)


def random_profile(rng, game):
    return tuple(cls.members[int(rng.integers(len(cls.members)))] for cls in game.classes)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
