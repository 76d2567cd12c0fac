from fractions import Fraction

import pytest

from conftest import random_weighted_digraph
from main.errors import DegreeError
from main.topology.complexes import WeightedDigraph, WeightedPathComplex, truncation_closure
from main.topology.filtration import edge_filtration, path_filtration
from main.topology.persistence import (
    INF,
    Bar,
    PersistenceDiagram,
    bars_alive,
    betti_persistence_oracle,
    diagrams,
    persistence_diagram,
)


def test_directed_cycle_diagrams(cycle3):
    filtered = edge_filtration(cycle3, 2)
    assert persistence_diagram(filtered, 1).points == ((1, INF),)
    assert persistence_diagram(filtered, 0).points == ((0, 1), (0, 1), (0, INF))


def test_staggered_cycle_is_born_last():
    g = WeightedDigraph.from_weighted_edges([("a", "b", 1), ("b", "c", 2), ("c", "a", 3)])
    filtered = edge_filtration(g, 2)
    assert persistence_diagram(filtered, 1).points == ((3, INF),)
    assert persistence_diagram(filtered, 0).points == ((0, 1), (0, 2), (0, INF))


def test_square_never_carries_a_loop():
    g = WeightedDigraph.from_weighted_edges([("0", "1", 1), ("1", "3", 1), ("0", "2", 2), ("2", "3", 2)])
    assert persistence_diagram(edge_filtration(g, 2), 1).points == ()


def test_four_cycle_survives_a_chord():
    g = WeightedDigraph.from_weighted_edges(
        [("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1), ("a", "c", 2)]
    )
    assert persistence_diagram(edge_filtration(g, 2), 1).points == ((1, INF),)


def test_path_filtration_diagram():
    p = WeightedPathComplex(truncation_closure(["a b c"]), {("a", "b"): 1, ("b", "c"): 1})
    filtered = path_filtration(p, 1)
    assert persistence_diagram(filtered, 0).points == ((0, 1), (0, 1), (0, INF))


def test_degree_needs_paths_one_above():
    g = WeightedDigraph.from_weighted_edges([("a", "b", 1)])
    with pytest.raises(DegreeError):
        persistence_diagram(edge_filtration(g, 1), 1)


def test_diagrams_for_several_degrees(cycle3):
    filtered = edge_filtration(cycle3, 2)
    both = diagrams(filtered, [0, 1])
    assert both[1] == persistence_diagram(filtered, 1)
    assert both[0].degree == 0


def test_diagram_validation():
    with pytest.raises(ValueError):
        PersistenceDiagram(0, ((2, 1),))
    with pytest.raises(ValueError):
        Bar(0, Fraction(2), Fraction(1))
    diagram = PersistenceDiagram(0, ((1, INF), (0, 2), (0, 2)))
    assert diagram.points[0] == (0, 2)
    assert diagram.multiplicities()[(Fraction(0), Fraction(2))] == 2
    assert diagram.infinite == ((1, INF),)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("degree", [0, 1])
def test_bars_match_inclusion_ranks(seed, degree):
    g = random_weighted_digraph(seed, n=4, density=0.45, top=3)
    filtered = edge_filtration(g, degree + 1)
    diagram = persistence_diagram(filtered, degree)
    values = filtered.index.values
    for i in range(len(values)):
        for j in range(i, len(values)):
            expected = betti_persistence_oracle(filtered, degree, i, j)
            assert bars_alive(diagram, values[i], values[j]) == expected, (seed, degree, i, j)
