import random
from fractions import Fraction

import pytest

from conftest import random_weighted_digraph
from main.algebra.pathcore import ElementaryPath
from main.errors import ClosureError, DomainError, OrderError, WeightDomainError
from main.topology.complexes import (
    Digraph,
    PathComplex,
    WeightedDigraph,
    WeightedPathComplex,
    complete_digraph,
    grounded_truncation,
    is_perfect,
    path_complex_from_digraph,
    path_complex_from_simplicial,
    truncation_closure,
    validate,
)
from main.topology.homology import homology_dims


def names(paths):
    return sorted(str(p) for p in paths)


def test_self_loops_are_rejected():
    with pytest.raises(DomainError):
        Digraph.from_edges([("a", "a")])


def test_weights_must_be_exact_and_positive():
    with pytest.raises(WeightDomainError):
        WeightedDigraph.from_weighted_edges([("a", "b", 0.5)])
    with pytest.raises(WeightDomainError):
        WeightedDigraph.from_weighted_edges([("a", "b", 0)])
    graph = Digraph.from_edges([("a", "b"), ("b", "c")])
    with pytest.raises(WeightDomainError):
        WeightedDigraph(graph, {("a", "b"): 1})


def test_decimal_weights_are_exact():
    g = WeightedDigraph.from_weighted_edges([("a", "b", "0.1")])
    assert g.weight("a", "b") == Fraction(1, 10)


def test_allowed_walks_of_square(square):
    p = path_complex_from_digraph(square.graph, 2)
    assert names(p.allowed(2)) == ["0 1 3", "0 2 3"]
    assert len(p.allowed(1)) == 4
    assert p.top_degree == 2
    assert p.allowed(-1) == frozenset({ElementaryPath(())})


def test_walks_may_revisit_vertices():
    g = Digraph.from_edges([("a", "b"), ("b", "a")])
    p = path_complex_from_digraph(g, 3)
    assert names(p.allowed(3)) == ["a b a b", "b a b a"]
    assert p.is_regular


def test_truncation_closure_keeps_contiguous_subwords_only():
    p = truncation_closure(["a b c"])
    assert "a b" in p and "b c" in p and "a" in p
    assert "a c" not in p
    assert p.vertices == frozenset({"a", "b", "c"})
    assert validate(p).ok


def test_validate_reports_missing_truncations():
    p = PathComplex.from_paths(["a", "b", "c", "a b c"])
    report = validate(p)
    assert not report.ok
    assert names(t for _, t in report.missing) == ["a b", "b c"]


def test_grounded_truncation_drops_low_and_high_degrees():
    g = Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "d")])
    p = path_complex_from_digraph(g, 3)
    bar = grounded_truncation(p, 1)
    assert bar.top_degree == 2
    assert names(bar.allowed(2)) == ["a b c", "b c d"]
    assert bar.vertices == p.vertices


def test_simplicial_path_complex_is_perfect():
    simplices = [{"a"}, {"b"}, {"c"}, {"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "b", "c"}]
    p = path_complex_from_simplicial(simplices, ["a", "b", "c"])
    assert "a b c" in p
    assert "b a" not in p
    assert is_perfect(p)
    assert not is_perfect(truncation_closure(["a b c"]))


def test_simplicial_input_errors():
    with pytest.raises(ClosureError):
        path_complex_from_simplicial([{"a"}, {"b"}, {"a", "b", "c"}], ["a", "b", "c"])
    with pytest.raises(OrderError):
        path_complex_from_simplicial([{"a"}, {"b"}, {"a", "b"}], ["a"])
    with pytest.raises(OrderError):
        path_complex_from_simplicial([{"a"}, {"b"}, {"a", "b"}], {"a": 0, "b": 0})


def test_complete_digraph():
    g = complete_digraph(["a", "b", "c"], 2)
    assert len(g.edges) == 6
    assert set(g.weights.values()) == {2}


def test_restrict_and_networkx_round_trip(square):
    p = path_complex_from_digraph(square.graph, 2)
    sub = p.restrict(["0", "1", "3"])
    assert names(sub.allowed(2)) == ["0 1 3"]
    assert sub.issubset(p)
    assert Digraph.from_networkx(square.graph.to_networkx()) == square.graph


def test_weighted_path_complex_needs_every_edge_weight():
    p = truncation_closure(["a b c"])
    with pytest.raises(WeightDomainError):
        WeightedPathComplex(p, {("a", "b"): 1})
    weighted = WeightedPathComplex(p, {("a", "b"): 1, ("b", "c"): "1/2"})
    assert weighted.weights[("b", "c")] == Fraction(1, 2)


def random_paths(rng, count):
    paths = []
    for _ in range(count):
        vertices = [rng.choice("abcde")]
        for _ in range(rng.randint(0, 3)):
            vertices.append(rng.choice([v for v in "abcde" if v != vertices[-1]]))
        paths.append(ElementaryPath(tuple(vertices)))
    return paths


@pytest.mark.parametrize("seed", range(10))
def test_truncation_closure_is_idempotent_and_minimal(seed):
    rng = random.Random(seed)
    paths = random_paths(rng, rng.randint(1, 5))
    closed = truncation_closure(paths)
    assert validate(closed).ok
    assert truncation_closure(closed.all_paths()) == closed
    # every member is a subword of a generator
    words = {w for path in paths for w in path.subwords()}
    assert set(closed.all_paths()) == words
    edges = [e for path in paths for e in path.edges()]
    walks = path_complex_from_digraph(Digraph.from_edges(edges, {v for path in paths for v in path}), 4)
    assert closed.issubset(walks)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("deg", [0, 1])
def test_grounded_truncation_keeps_the_homology_in_its_degree(seed, deg):
    g = random_weighted_digraph(seed, n=5, density=0.35).graph
    p = path_complex_from_digraph(g, 3)
    bar = grounded_truncation(p, deg)
    assert bar.allowed(deg) == p.allowed(deg)
    assert bar.allowed(deg + 1) == p.allowed(deg + 1)
    assert homology_dims(bar, deg)[deg] == homology_dims(p, deg)[deg]


@pytest.mark.parametrize("seed", range(6))
def test_walk_complexes_commute_with_truncation(seed):
    g = random_weighted_digraph(seed, n=4, density=0.5).graph
    deep = path_complex_from_digraph(g, 4)
    for k in range(4):
        assert deep.truncate(k) == path_complex_from_digraph(g, k)
        assert validate(path_complex_from_digraph(g, k)).ok
