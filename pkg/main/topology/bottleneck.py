"""
Exact bottleneck distance between persistence diagrams.

Infinite bars are matched among themselves by sorted birth. Finite
points are handled by a binary search over the finitely many candidate
distances, testing each with a perfect-matching problem on the diagram
points plus one diagonal slot per point of the other diagram.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from networkx.algorithms import bipartite

from main.errors import DegreeError
from main.topology.persistence import INF, PersistenceDiagram

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def coordinate_gap(a, b):
    """|a − b| with |∞ − ∞| = 0 and |∞ − finite| = ∞."""
    if a == INF and b == INF:
        return ZERO
    if a == INF or b == INF:
        return INF
    return abs(a - b)


def pair_cost(x, y):
    return max(coordinate_gap(x[0], y[0]), coordinate_gap(x[1], y[1]))


def diagonal_cost(x):
    """Half persistence; ∞ for an infinite bar."""
    if x[1] == INF:
        return INF
    return (x[1] - x[0]) / 2


@dataclass(frozen=True)
class Matching:
    """
    Pairs of points (one from each diagram) plus the points left unmatched.
    Each point occurrence appears exactly once.
    """

    pairs: tuple = ()
    unmatched_first: tuple = ()
    unmatched_second: tuple = ()


def matching_cost(matching: Matching):
    costs = [pair_cost(x, y) for x, y in matching.pairs]
    costs += [diagonal_cost(x) for x in matching.unmatched_first]
    costs += [diagonal_cost(y) for y in matching.unmatched_second]
    return max(costs, default=ZERO)


def _check_degrees(d1: PersistenceDiagram, d2: PersistenceDiagram):
    if d1.degree != d2.degree:
        raise DegreeError(f"diagrams have different degrees: {d1.degree} vs {d2.degree}")


def _feasible_matching(a: tuple, b: tuple, eps):
    """
    Perfect matching of a ∪ Δ(b) against b ∪ Δ(a) using only edges of cost <= eps,
    or None when none exists.
    """
    # Left side: points of a, then one diagonal copy per point of b; right side mirrors it
    graph = nx.Graph()
    left = [("a", i) for i in range(len(a))] + [("da", j) for j in range(len(b))]
    right = [("b", j) for j in range(len(b))] + [("db", i) for i in range(len(a))]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from(right, bipartite=1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if pair_cost(x, y) <= eps:
                graph.add_edge(("a", i), ("b", j))
        if diagonal_cost(x) <= eps:
            graph.add_edge(("a", i), ("db", i))
    for j, y in enumerate(b):
        if diagonal_cost(y) <= eps:
            graph.add_edge(("da", j), ("b", j))
        # Diagonal to diagonal is free
        for i in range(len(a)):
            graph.add_edge(("da", j), ("db", i))
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    if sum(1 for node in left if node in matching) < len(left):
        return None
    return matching


def _candidates(a: tuple, b: tuple) -> list:
    values = {ZERO}
    for x in a:
        values.add(diagonal_cost(x))
        for y in b:
            values.add(abs(x[0] - y[0]))
            values.add(abs(x[1] - y[1]))
    for y in b:
        values.add(diagonal_cost(y))
    return sorted(values)


def _finite_part(a: tuple, b: tuple):
    """Smallest feasible candidate and the matching realising it."""
    if not a and not b:
        return ZERO, {}
    candidates = _candidates(a, b)
    lo, hi = 0, len(candidates) - 1
    best = _feasible_matching(a, b, candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        found = _feasible_matching(a, b, candidates[mid])
        if found is None:
            lo = mid + 1
        else:
            hi, best = mid, found
    return candidates[hi], best


def optimal_matching(d1: PersistenceDiagram, d2: PersistenceDiagram):
    """
    Returns:
        tuple: (distance, Matching) with matching_cost(Matching) == distance
    """
    _check_degrees(d1, d2)
    inf1 = sorted(p[0] for p in d1.infinite)
    inf2 = sorted(p[0] for p in d2.infinite)
    shared = min(len(inf1), len(inf2))
    pairs = [((inf1[k], INF), (inf2[k], INF)) for k in range(shared)]
    extra1 = tuple((b, INF) for b in inf1[shared:])
    extra2 = tuple((b, INF) for b in inf2[shared:])

    a, b = d1.finite, d2.finite
    eps, found = _finite_part(a, b)
    unmatched_a, unmatched_b = [], []
    for i, x in enumerate(a):
        partner = found[("a", i)]
        if partner[0] == "b":
            pairs.append((x, b[partner[1]]))
        else:
            unmatched_a.append(x)
    for j, y in enumerate(b):
        if found[("b", j)][0] == "da":
            unmatched_b.append(y)

    matching = Matching(tuple(pairs), extra1 + tuple(unmatched_a), extra2 + tuple(unmatched_b))
    distance = matching_cost(matching)
    logger.debug("bottleneck: finite part %s, total %s", eps, distance)
    return distance, matching


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram):
    """
    Exact bottleneck distance between two diagrams of the same degree.

    Infinite bars are matched among themselves in birth order; the finite
    part is a binary search over candidate costs with a perfect-matching test.

    Args:
        d1: First diagram
        d2: Second diagram

    Returns:
        Fraction or float: d_B, or ``math.inf`` when the infinite bar counts differ
    """
    _check_degrees(d1, d2)
    if len(d1.infinite) != len(d2.infinite):
        return math.inf
    inf_cost = max(
        (abs(x[0] - y[0]) for x, y in zip(d1.infinite, d2.infinite)),
        default=ZERO,
    )
    eps, _ = _finite_part(d1.finite, d2.finite)
    return max(inf_cost, eps)
