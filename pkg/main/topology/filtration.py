"""
Filtrations of weighted digraphs and weighted path complexes.

The edge-level filtration keeps the edges of weight <= δ; the path
sublevel filtration keeps the allowed paths of length <= δ. Both start at
δ = 0 with every vertex present, and both change only at finitely many
critical values.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from main.algebra.pathcore import as_path
from main.errors import DomainError, NestingError, WeightDomainError
from main.topology.complexes import (
    Digraph,
    PathComplex,
    WeightedDigraph,
    WeightedPathComplex,
    path_complex_from_digraph,
    validate,
)

logger = logging.getLogger(__name__)

EDGE = "edge"
PATH = "path"


@dataclass(frozen=True)
class FiltrationIndex:
    """Strictly increasing critical values, starting at 0."""

    values: tuple

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if not values or values[0] != 0:
            raise ValueError("critical values must start at 0")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ValueError("critical values must be strictly increasing")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def position(self, delta) -> int:
        """Index of the last critical value <= δ."""
        delta = Fraction(delta)
        if delta < 0:
            raise DomainError(f"filtration values start at 0, got {delta}")
        return bisect.bisect_right(self.values, delta) - 1


@dataclass(frozen=True)
class FilteredComplex:
    """
    One path complex per critical value, each contained in the next.

    ``max_dim`` is the top degree the snapshots were generated up to, or
    None when they carry every allowed path of the input.
    """

    index: FiltrationIndex
    snapshots: tuple
    kind: str = PATH
    max_dim: int | None = None

    def __post_init__(self):
        if len(self.snapshots) != len(self.index):
            raise ValueError("one snapshot per critical value is required")
        for i in range(len(self.snapshots) - 1):
            if not self.snapshots[i].issubset(self.snapshots[i + 1]):
                raise NestingError(f"snapshot at {self.index[i]} is not contained in the next one")

    @property
    def final(self) -> PathComplex:
        return self.snapshots[-1]

    def __len__(self):
        return len(self.snapshots)


def edge_sublevel(g: WeightedDigraph, delta) -> Digraph:
    """G^δ: every vertex, and the edges of weight at most δ."""
    delta = Fraction(delta)
    return Digraph(g.vertices, frozenset(e for e, w in g.weights.items() if w <= delta))


def _weights_of(w) -> Mapping:
    if isinstance(w, (WeightedDigraph, WeightedPathComplex)):
        return w.weights
    return w


def path_length(path, w) -> Fraction:
    """Sum of the n edge weights of an n-path; 0-paths have length 0."""
    path = as_path(path)
    weights = _weights_of(w)
    total = Fraction(0)
    for edge in path.edges():
        if edge not in weights:
            raise WeightDomainError(f"1-path {edge[0]} {edge[1]} of {path} has no weight")
        total += weights[edge]
    return total


def path_sublevel(p: WeightedPathComplex, delta) -> PathComplex:
    """Vertices always; higher paths of length <= δ."""
    delta = Fraction(delta)
    strata = [p.complex.allowed(0)]
    for n in range(1, p.complex.top_degree + 1):
        strata.append(frozenset(e for e in p.complex.allowed(n) if path_length(e, p.weights) <= delta))
    return PathComplex(p.vertices, tuple(strata))


def critical_values(source, max_dim: int | None = None) -> FiltrationIndex:
    """
    {0} together with the distinct edge weights (digraphs) or the distinct
    lengths of allowed paths up to ``max_dim`` (path complexes).
    """
    values = {Fraction(0)}
    if isinstance(source, WeightedDigraph):
        values.update(source.weights.values())
    elif isinstance(source, WeightedPathComplex):
        top = source.complex.top_degree if max_dim is None else min(max_dim, source.complex.top_degree)
        for n in range(1, top + 1):
            values.update(path_length(e, source.weights) for e in source.complex.allowed(n))
    else:
        raise TypeError(f"cannot filter {type(source).__name__}")
    return FiltrationIndex(tuple(sorted(values)))


def edge_filtration(g: WeightedDigraph, max_dim: int) -> FilteredComplex:
    """P(G^δ) up to degree ``max_dim`` at every critical value."""
    index = critical_values(g)
    snapshots = tuple(path_complex_from_digraph(edge_sublevel(g, delta), max_dim) for delta in index)
    logger.info("edge filtration: %d critical values, max_dim %d", len(index), max_dim)
    return FilteredComplex(index, snapshots, EDGE, max_dim)


def path_filtration(p: WeightedPathComplex, max_dim: int | None = None) -> FilteredComplex:
    """Path sublevel complexes at every critical value, truncated at ``max_dim`` when given."""
    if max_dim is not None:
        truncated = p.complex.truncate(max_dim)
        p = WeightedPathComplex(truncated, {e: p.weights[e] for e in truncated.edges})
    index = critical_values(p)
    snapshots = tuple(path_sublevel(p, delta) for delta in index)
    logger.info("path filtration: %d critical values", len(index))
    return FilteredComplex(index, snapshots, PATH, max_dim)


def snapshot_at(filtered: FilteredComplex, delta) -> PathComplex:
    """The snapshot in force at δ (constant between critical values)."""
    return filtered.snapshots[filtered.index.position(delta)]


def check_snapshots(filtered: FilteredComplex) -> list:
    """Validation problems of every snapshot, as (δ, description) pairs."""
    problems = []
    for delta, snapshot in zip(filtered.index, filtered.snapshots):
        report = validate(snapshot)
        if not report.ok:
            problems.append((delta, report.describe()))
    return problems
