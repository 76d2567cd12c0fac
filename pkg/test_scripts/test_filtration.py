from fractions import Fraction

import pytest

from main.errors import DomainError, NestingError, WeightDomainError
from main.topology.complexes import PathComplex, WeightedDigraph, WeightedPathComplex, truncation_closure
from main.topology.filtration import (
    EDGE,
    FilteredComplex,
    FiltrationIndex,
    check_snapshots,
    critical_values,
    edge_filtration,
    edge_sublevel,
    path_filtration,
    path_length,
    path_sublevel,
    snapshot_at,
)


@pytest.fixture
def weighted_line():
    """Path complex on a -> b -> c with |ab| = 1, |bc| = 2."""
    return WeightedPathComplex(truncation_closure(["a b c"]), {("a", "b"): 1, ("b", "c"): 2})


def test_critical_values_of_a_digraph():
    g = WeightedDigraph.from_weighted_edges([("a", "b", 1), ("b", "c", 3), ("c", "a", "1.5")])
    assert list(critical_values(g)) == [0, 1, Fraction(3, 2), 3]


def test_critical_values_of_a_path_complex(weighted_line):
    assert list(critical_values(weighted_line)) == [0, 1, 2, 3]
    assert list(critical_values(weighted_line, max_dim=1)) == [0, 1, 2]


def test_index_positions():
    index = FiltrationIndex((0, 1, 2))
    assert index.position(Fraction(3, 2)) == 1
    assert index.position(5) == 2
    with pytest.raises(DomainError):
        index.position(-1)
    with pytest.raises(ValueError):
        FiltrationIndex((1, 2))
    with pytest.raises(ValueError):
        FiltrationIndex((0, 2, 2))


def test_edge_filtration_starts_with_bare_vertices(cycle3):
    filtered = edge_filtration(cycle3, 2)
    assert filtered.kind == EDGE
    assert len(filtered) == 2
    start = snapshot_at(filtered, 0)
    assert start.top_degree == 0
    assert len(start.allowed(0)) == 3
    assert snapshot_at(filtered, Fraction(7, 2)) == filtered.final
    assert len(filtered.final.allowed(2)) == 3


def test_edge_sublevel(cycle3):
    heavier = cycle3.with_weights({("a", "b"): 1, ("b", "c"): 2, ("c", "a"): 3})
    assert edge_sublevel(heavier, 2).edges == frozenset({("a", "b"), ("b", "c")})


def test_path_length(weighted_line):
    assert path_length("a b c", weighted_line) == 3
    assert path_length("b", weighted_line.weights) == 0
    with pytest.raises(WeightDomainError):
        path_length("c a", weighted_line)


def test_path_sublevel_keeps_vertices(weighted_line):
    at_two = path_sublevel(weighted_line, 2)
    assert "a b" in at_two and "b c" in at_two
    assert "a b c" not in at_two
    assert len(path_sublevel(weighted_line, 0).allowed(0)) == 3


def test_path_filtration_snapshots_are_closed(weighted_line):
    filtered = path_filtration(weighted_line)
    assert list(filtered.index) == [0, 1, 2, 3]
    assert check_snapshots(filtered) == []
    truncated = path_filtration(weighted_line, max_dim=1)
    assert truncated.final.top_degree == 1


def test_snapshots_must_be_nested():
    small = truncation_closure(["a b"])
    large = PathComplex.from_paths(["a", "b"])
    with pytest.raises(NestingError):
        FilteredComplex(FiltrationIndex((0, 1)), (small, large))
