"""
Digraphs, path complexes and their weighted variants.

Covers every way a path complex is produced here: allowed walks of a
digraph, truncation closure of an arbitrary path set, the grounded
truncation used by the path-complex stability bound, and the monotone
path complex of an ordered simplicial complex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Callable, Iterable, Mapping

import networkx as nx

from main.algebra.pathcore import ElementaryPath, EMPTY_PATH, as_path
from main.errors import ClosureError, DomainError, OrderError, WeightDomainError

logger = logging.getLogger(__name__)


def _as_weight(value) -> Fraction:
    if isinstance(value, float):
        raise WeightDomainError(f"weight {value!r} must be given exactly (int, Fraction or decimal string)")
    return Fraction(value) if not isinstance(value, str) else Fraction(value.strip())


@dataclass(frozen=True)
class Digraph:
    """A finite directed graph without self-loops."""

    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        vertices = frozenset(str(v) for v in self.vertices)
        edges = frozenset((str(u), str(v)) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at {u!r} is not allowed")
            if u not in vertices or v not in vertices:
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = ()) -> "Digraph":
        edges = [(str(u), str(v)) for u, v in edges]
        vertex_set = {str(v) for v in vertices}
        for u, v in edges:
            vertex_set.update((u, v))
        return cls(frozenset(vertex_set), frozenset(edges))

    @cached_property
    def successors(self) -> dict:
        adjacency = {v: [] for v in sorted(self.vertices)}
        for u, v in sorted(self.edges):
            adjacency[u].append(v)
        return adjacency

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.vertices))
        graph.add_edges_from(sorted(self.edges))
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.DiGraph) -> "Digraph":
        return cls.from_edges(graph.edges(), graph.nodes())


@dataclass(frozen=True)
class WeightedDigraph:
    """A digraph with a positive exact weight on every edge."""

    graph: Digraph
    weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        weights = {(str(u), str(v)): _as_weight(w) for (u, v), w in dict(self.weights).items()}
        if set(weights) != set(self.graph.edges):
            missing = sorted(set(self.graph.edges) - set(weights))
            extra = sorted(set(weights) - set(self.graph.edges))
            raise WeightDomainError(f"weights must cover exactly the edges (missing {missing}, extra {extra})")
        for edge, w in weights.items():
            if w <= 0:
                raise WeightDomainError(f"weight of edge {edge} must be positive, got {w}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_weighted_edges(cls, triples: Iterable, vertices: Iterable = ()) -> "WeightedDigraph":
        triples = [(str(u), str(v), w) for u, v, w in triples]
        graph = Digraph.from_edges([(u, v) for u, v, _ in triples], vertices)
        return cls(graph, {(u, v): w for u, v, w in triples})

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    @property
    def edges(self) -> frozenset:
        return self.graph.edges

    def weight(self, u, v) -> Fraction:
        return self.weights[(u, v)]

    def with_weights(self, weights: Mapping) -> "WeightedDigraph":
        return WeightedDigraph(self.graph, weights)


def complete_digraph(vertices: Iterable, weight: Callable | Fraction | int | str = 1) -> WeightedDigraph:
    """Complete digraph on ``vertices``; ``weight`` is a constant or a function of (u, v)."""
    vertices = sorted(str(v) for v in vertices)
    pick = weight if callable(weight) else (lambda u, v: weight)
    return WeightedDigraph.from_weighted_edges(
        [(u, v, pick(u, v)) for u, v in permutations(vertices, 2)], vertices
    )


@dataclass(frozen=True)
class PathComplex:
    """
    Allowed elementary paths on a finite vertex set, grouped by degree.

    ``strata[n]`` is P_n. Construction does not enforce truncation
    closure; ``validate`` reports what is missing.
    """

    vertices: frozenset
    strata: tuple

    def __post_init__(self):
        strata = [frozenset(as_path(p) for p in layer) for layer in self.strata]
        while len(strata) > 1 and not strata[-1]:
            strata.pop()
        if not strata:
            strata = [frozenset()]
        for n, layer in enumerate(strata):
            for path in layer:
                if path.degree != n:
                    raise ValueError(f"path {path} stored in degree {n}")
        object.__setattr__(self, "vertices", frozenset(str(v) for v in self.vertices))
        object.__setattr__(self, "strata", tuple(strata))

    @classmethod
    def from_paths(cls, paths: Iterable, vertices: Iterable | None = None) -> "PathComplex":
        """Group ``paths`` by degree; the vertex set defaults to the allowed 0-paths."""
        grouped = {}
        for path in paths:
            path = as_path(path)
            if path.degree < 0:
                continue
            grouped.setdefault(path.degree, set()).add(path)
        top = max(grouped, default=0)
        strata = tuple(frozenset(grouped.get(n, ())) for n in range(top + 1))
        if vertices is None:
            vertices = {p.vertices[0] for p in strata[0]}
        return cls(frozenset(vertices), strata)

    @property
    def top_degree(self) -> int:
        return len(self.strata) - 1

    def allowed(self, n: int) -> frozenset:
        if n == -1:
            return frozenset({EMPTY_PATH})
        if n < -1 or n >= len(self.strata):
            return frozenset()
        return self.strata[n]

    @property
    def edges(self) -> frozenset:
        return frozenset(p.edges()[0] for p in self.allowed(1))

    def all_paths(self):
        for layer in self.strata:
            yield from sorted(layer)

    def __contains__(self, path) -> bool:
        path = as_path(path)
        return path in self.allowed(path.degree)

    @cached_property
    def is_regular(self) -> bool:
        return all(p.is_regular() for layer in self.strata for p in layer)

    @property
    def size(self) -> int:
        return sum(len(layer) for layer in self.strata)

    def truncate(self, max_dim: int) -> "PathComplex":
        return PathComplex(self.vertices, self.strata[: max_dim + 1])

    def restrict(self, vertices: Iterable) -> "PathComplex":
        keep = frozenset(str(v) for v in vertices)
        return PathComplex(
            self.vertices & keep,
            tuple(frozenset(p for p in layer if set(p.vertices) <= keep) for layer in self.strata),
        )

    def issubset(self, other: "PathComplex") -> bool:
        return all(layer <= other.allowed(n) for n, layer in enumerate(self.strata))


@dataclass(frozen=True)
class WeightedPathComplex:
    """A path complex with a positive exact weight on every allowed 1-path."""

    complex: PathComplex
    weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        weights = {(str(u), str(v)): _as_weight(w) for (u, v), w in dict(self.weights).items()}
        edges = self.complex.edges
        if set(weights) != set(edges):
            missing = sorted(set(edges) - set(weights))
            extra = sorted(set(weights) - set(edges))
            raise WeightDomainError(f"weights must cover exactly P_1 (missing {missing}, extra {extra})")
        for edge, w in weights.items():
            if w <= 0:
                raise WeightDomainError(f"weight of 1-path {edge} must be positive, got {w}")
        object.__setattr__(self, "weights", weights)

    @property
    def vertices(self) -> frozenset:
        return self.complex.vertices

    def with_weights(self, weights: Mapping) -> "WeightedPathComplex":
        return WeightedPathComplex(self.complex, weights)

    def restricted_to(self, sub: PathComplex) -> "WeightedPathComplex":
        """Weights restricted to the 1-paths of a sub-complex."""
        return WeightedPathComplex(sub, {e: self.weights[e] for e in sub.edges})


def path_complex_from_digraph(g: Digraph, max_dim: int) -> PathComplex:
    """
    All edge-walks of length n <= max_dim.

    Args:
        g: The digraph
        max_dim: Longest walk kept; H_p needs max_dim >= p + 1

    Returns:
        PathComplex: P(G) truncated at max_dim, regular and truncation-closed
    """
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    layer = {ElementaryPath((v,)) for v in g.vertices}
    strata = [frozenset(layer)]
    for _ in range(max_dim):
        layer = {
            ElementaryPath(path.vertices + (nxt,))
            for path in layer
            for nxt in g.successors[path.vertices[-1]]
        }
        if not layer:
            break
        strata.append(frozenset(layer))
    logger.debug("P(G) up to degree %d: %s", max_dim, [len(s) for s in strata])
    return PathComplex(g.vertices, tuple(strata))


def truncation_closure(paths: Iterable, vertices: Iterable = ()) -> PathComplex:
    """Smallest truncation-closed set containing ``paths``: every contiguous subword."""
    closed = set()
    for path in paths:
        path = as_path(path)
        if path.degree < 0:
            continue
        closed.update(path.subwords())
    closed.update(ElementaryPath((str(v),)) for v in vertices)
    return PathComplex.from_paths(closed)


def grounded_truncation(p: PathComplex, deg: int) -> PathComplex:
    """Closure of P_deg ∪ P_{deg+1}; nothing above degree deg+1."""
    if deg < 0:
        raise ValueError("deg must be non-negative")
    return truncation_closure(set(p.allowed(deg)) | set(p.allowed(deg + 1)))


def path_complex_from_simplicial(simplices: Iterable, order: Mapping | list) -> PathComplex:
    """
    Monotone path complex of an ordered simplicial complex: each simplex
    contributes its vertices sorted by ``order``.

    ``order`` is either a vertex -> rank mapping or a list giving the
    increasing order.
    """
    simplex_set = {frozenset(str(v) for v in s) for s in simplices}
    simplex_set.discard(frozenset())
    if isinstance(order, Mapping):
        rank = {str(v): r for v, r in order.items()}
    else:
        rank = {str(v): i for i, v in enumerate(order)}
    vertices = set().union(*simplex_set) if simplex_set else set()
    for v in vertices:
        if v not in rank:
            raise OrderError(f"vertex {v!r} has no position in the order")
    used = [rank[v] for v in vertices]
    if len(set(used)) != len(used):
        raise OrderError("order is not injective on the vertices")
    for s in simplex_set:
        for k in range(1, len(s)):
            for face in combinations(sorted(s), k):
                if frozenset(face) not in simplex_set:
                    raise ClosureError(f"face {sorted(face)} of simplex {sorted(s)} is missing")
    paths = [ElementaryPath(tuple(sorted(s, key=rank.__getitem__))) for s in simplex_set]
    return PathComplex.from_paths(paths, vertices)


@dataclass(frozen=True)
class ValidationReport:
    missing: tuple = ()
    missing_vertices: tuple = ()
    extra_vertices: tuple = ()

    @property
    def ok(self) -> bool:
        return not (self.missing or self.missing_vertices or self.extra_vertices)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"missing {t} (truncation of {p})" for p, t in self.missing]
        lines += [f"vertex {v} has no 0-path" for v in self.missing_vertices]
        lines += [f"0-path {v} is not a declared vertex" for v in self.extra_vertices]
        return "; ".join(lines)


def validate(p: PathComplex) -> ValidationReport:
    """Every missing truncation, plus any disagreement between P_0 and the vertex set."""
    missing = []
    for layer in p.strata[1:]:
        for path in sorted(layer):
            for t in path.truncations():
                if t not in p:
                    missing.append((path, t))
    zero_paths = {path.vertices[0] for path in p.allowed(0)}
    return ValidationReport(
        missing=tuple(missing),
        missing_vertices=tuple(sorted(p.vertices - zero_paths)),
        extra_vertices=tuple(sorted(zero_paths - p.vertices)),
    )


def is_perfect(p: PathComplex) -> bool:
    """Every non-empty subsequence of every allowed path is allowed."""
    for path in p.all_paths():
        n = len(path.vertices)
        for k in range(1, n):
            for idx in combinations(range(n), k):
                if ElementaryPath(tuple(path.vertices[i] for i in idx)) not in p:
                    return False
    return True
