from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from digraph_consensus import Digraph
from digraph_consensus.generate import converging_path, nonisomorphic_digraphs

FIXTURES = Path(__file__).parent / "fixtures"


def two_cycle(w01=1.0, w10=1.0):
    return Digraph(2, ((0, 1, w01), (1, 0, w10)))


def two_disjoint_two_cycles():
    return Digraph(4, ((0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)))


def empty(n):
    return Digraph(n)


@st.composite
def digraphs(draw, max_n=6, weighted=True):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if weighted:
        ws = draw(
            st.lists(
                st.floats(0.01, 10.0, allow_nan=False, allow_infinity=False),
                min_size=len(chosen),
                max_size=len(chosen),
            )
        )
    else:
        ws = [1.0] * len(chosen)
    return Digraph(n, tuple((i, j, w) for (i, j), w in zip(chosen, ws)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture(scope="session")
def classes_up_to_5():
    """One representative per isomorphism class, all n <= 5."""
    return [g for n in range(1, 6) for g in nonisomorphic_digraphs(n)]


@pytest.fixture
def path5():
    return converging_path(5)


# criterion id -> (passed, summary); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        ok, summary = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {summary}")
