import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from kappakh.braid import BraidWord  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def random_braid(rng: random.Random, n_max: int = 5, c_max: int = 8, n_min: int = 1) -> BraidWord:
    n = rng.randint(n_min, n_max)
    c = rng.randint(0, c_max) if n > 1 else 0
    letters = tuple(rng.choice((-1, 1)) * rng.randint(1, n - 1) for _ in range(c))
    return BraidWord(n, letters)


@st.composite
def braids(draw, n_max=5, c_max=8, n_min=1):
    n = draw(st.integers(n_min, n_max))
    if n == 1:
        return BraidWord(1, ())
    gens = st.integers(1, n - 1).flatmap(lambda g: st.sampled_from((g, -g)))
    return BraidWord(n, tuple(draw(st.lists(gens, max_size=c_max))))


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
