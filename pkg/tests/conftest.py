import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from toricstab import Polytope  # noqa: E402
from toricstab import corpus as corpus_mod  # noqa: E402


@pytest.fixture(scope="session")
def corpus_entries():
    return {e.name: e for e in corpus_mod.load_corpus()}


@pytest.fixture(scope="session")
def corpus_gate(corpus_entries):
    """Integrity-gate results, computed once; criteria 5-6 consume this."""
    return {name: corpus_mod.verify_entry(e) for name, e in corpus_entries.items()}


@pytest.fixture(scope="session")
def cube():
    return Polytope.from_halfspaces(
        [
            ((1, 0, 0), 1),
            ((-1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, -1, 0), 1),
            ((0, 0, 1), 1),
            ((0, 0, -1), 1),
        ],
        "cube",
    )


@pytest.fixture(scope="session")
def cross_polytope():
    return Polytope.from_vertices(
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
        "cross",
    )


@pytest.fixture(scope="session")
def cp2():
    return Polytope.from_halfspaces(
        [((-1, 0), 1), ((0, -1), 1), ((1, 1), 1)], "cp2"
    )


@pytest.fixture(scope="session")
def simplex2d():
    return Polytope.from_vertices([(0, 0), (1, 0), (0, 1)], "simplex2")
