import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Make the main package importable (same approach as the app entry point)
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from main.algebra.linalg import ScalarField  # noqa: E402
from main.topology.complexes import Digraph, WeightedDigraph  # noqa: E402


@pytest.fixture
def rational():
    return ScalarField.rational()


@pytest.fixture
def cycle3():
    """Directed 3-cycle a -> b -> c -> a, unit weights."""
    return WeightedDigraph.from_weighted_edges([("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])


@pytest.fixture
def square():
    """0 -> 1 -> 3 and 0 -> 2 -> 3, unit weights."""
    return WeightedDigraph.from_weighted_edges(
        [("0", "1", 1), ("0", "2", 1), ("1", "3", 1), ("2", "3", 1)]
    )


@pytest.fixture
def triangle():
    """0 -> 1 -> 2 with the shortcut 0 -> 2."""
    return WeightedDigraph.from_weighted_edges([("0", "1", 1), ("1", "2", 1), ("0", "2", 1)])


def random_weighted_digraph(seed: int, n: int = 4, density: float = 0.4, top: int = 4) -> WeightedDigraph:
    """Random simple digraph on v0..v{n-1} with weights in {1/2, 1, ..., top}."""
    rng = random.Random(seed)
    vertices = [f"v{i}" for i in range(n)]
    triples = []
    for u in vertices:
        for v in vertices:
            if u != v and rng.random() < density:
                triples.append((u, v, Fraction(rng.randint(1, 2 * top), 2)))
    return WeightedDigraph.from_weighted_edges(triples, vertices)


def edgeless(k: int) -> Digraph:
    return Digraph.from_edges([], [f"v{i}" for i in range(k)])
