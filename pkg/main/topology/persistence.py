"""
Persistence diagrams of filtered path complexes.

All snapshots of a filtration live inside the final one, so every Ω_n
is a subspace of the final A_n and every boundary map is a restriction
of one ∂. A basis adapted to the flags Ω_n(δ_1) ⊆ ... ⊆ Ω_n(δ_m) turns
persistence into a single column reduction of ∂: Ω_{p+1} -> Ω_p.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from joblib import Parallel, delayed

from main.algebra.linalg import EchelonForm, ScalarField, SubspaceBasis, flag_adapted_basis, rank
from main.algebra.pathcore import FormalChain, boundary
from main.errors import ConsistencyError, DegreeError, NotInSpanError
from main.topology.filtration import FilteredComplex
from main.topology.homology import allowed_space, chain_complex, homology_map, induced_chain_map, omega_basis
from main.topology.homotopy import VertexMap

logger = logging.getLogger(__name__)

INF = math.inf


def _sort_key(point):
    return point[0], point[1]


@dataclass(frozen=True)
class Bar:
    degree: int
    birth: Fraction
    death: Fraction | float

    def __post_init__(self):
        if self.birth > self.death:
            raise ValueError(f"bar born at {self.birth} dies earlier, at {self.death}")

    @property
    def persistence(self):
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """A multiset of (birth, death) points; death may be ``math.inf``."""

    degree: int
    points: tuple = ()

    def __post_init__(self):
        points = []
        for birth, death in self.points:
            birth = Fraction(birth)
            death = INF if death == INF else Fraction(death)
            if birth == INF or birth > death:
                raise ValueError(f"invalid point ({birth}, {death})")
            points.append((birth, death))
        object.__setattr__(self, "points", tuple(sorted(points, key=_sort_key)))

    @classmethod
    def from_bars(cls, degree: int, bars: Iterable[Bar]) -> "PersistenceDiagram":
        return cls(degree, tuple((b.birth, b.death) for b in bars))

    def bars(self) -> list:
        return [Bar(self.degree, b, d) for b, d in self.points]

    def multiplicities(self) -> Counter:
        return Counter(self.points)

    @property
    def finite(self) -> tuple:
        return tuple(p for p in self.points if p[1] != INF)

    @property
    def infinite(self) -> tuple:
        return tuple(p for p in self.points if p[1] == INF)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _embed(omega, ambient_index: dict, size: int, field: ScalarField) -> SubspaceBasis:
    """Re-express an Ω basis in the coordinates of a larger allowed space."""
    vectors = []
    for v in omega.vectors.vectors:
        w = [field.zero] * size
        for path, c in zip(omega.ambient, v):
            w[ambient_index[path]] = c
        vectors.append(tuple(w))
    return SubspaceBasis(field, size, tuple(vectors))


def _flag(filtered: FilteredComplex, n: int, field: ScalarField, regular_mode: bool):
    final_ambient = allowed_space(filtered.final, n, regular_mode)
    index = {path: i for i, path in enumerate(final_ambient)}
    members = [
        _embed(omega_basis(snapshot, n, field, regular_mode), index, len(final_ambient), field)
        for snapshot in filtered.snapshots
    ]
    basis, entries = flag_adapted_basis(members)
    return final_ambient, basis, tuple(e - 1 for e in entries)


def _chain(field, degree, ambient, vector):
    return FormalChain(field, degree, tuple((p, c) for p, c in zip(ambient, vector) if not field.is_zero(c)))


def _to_vector(field, chain, index: dict, size: int) -> tuple:
    v = [field.zero] * size
    for path, c in chain.terms:
        if path not in index:
            raise ConsistencyError(f"{path} is not in the final allowed space")
        v[index[path]] = c
    return tuple(v)


def persistence_diagram(filtered: FilteredComplex, degree: int, field: ScalarField | None = None) -> PersistenceDiagram:
    """
    Interval decomposition of δ -> H_degree(snapshot(δ)).

    Zero-length bars are dropped; classes alive in the final snapshot
    get death ∞.

    Args:
        filtered: Edge or path filtration holding paths up to degree + 1
        degree: Homology degree p
        field: Coefficient field (rationals when omitted)

    Returns:
        PersistenceDiagram: Bars sorted by (birth, death)
    """
    field = field or ScalarField.rational()
    if degree < 0:
        raise DegreeError("homology degree must be non-negative")
    if filtered.max_dim is not None and filtered.max_dim < degree + 1:
        raise DegreeError(f"H_{degree} needs paths up to degree {degree + 1}; filtration stops at {filtered.max_dim}")
    regular_mode = filtered.final.is_regular
    values = filtered.index.values

    # Flag-adapted bases of Ω_p and Ω_p+1; entry[j] is where vector j appears
    a_p, u_basis, u_entry = _flag(filtered, degree, field, regular_mode)
    a_up, w_basis, w_entry = _flag(filtered, degree + 1, field, regular_mode)
    u_vectors = u_basis.vectors

    # u_j creates a cycle iff its boundary depends on the earlier boundaries
    if degree == 0:
        positive = [True] * len(u_vectors)
    else:
        lower = allowed_space(filtered.final, degree - 1, regular_mode)
        lower_index = {path: i for i, path in enumerate(lower)}
        images = EchelonForm(field, len(lower))
        positive = []
        for v in u_vectors:
            image = boundary(_chain(field, degree, a_p, v), regular_mode)
            positive.append(not images.add(_to_vector(field, image, lower_index, len(lower))))

    u_echelon = EchelonForm(field, len(a_p))
    for v in u_vectors:
        u_echelon.add(v)
    a_p_index = {path: i for i, path in enumerate(a_p)}

    # Column reduction of ∂ in the u-basis; each surviving low entry pairs a birth with a death
    pivots = {}
    pairs = []
    for j, w in enumerate(w_basis.vectors):
        image = boundary(_chain(field, degree + 1, a_up, w), regular_mode)
        try:
            column = list(u_echelon.coordinates(_to_vector(field, image, a_p_index, len(a_p))))
        except NotInSpanError:
            raise ConsistencyError("∂ of an Ω_{p+1} vector is outside Ω_p") from None
        low = _low(field, column)
        while low is not None and low in pivots:
            other = pivots[low]
            factor = column[low] / other[low]
            column = [a - factor * b for a, b in zip(column, other)]
            low = _low(field, column)
        if low is not None:
            if not positive[low]:
                raise ConsistencyError("a boundary was paired with a non-cycle basis vector")
            pivots[low] = column
            pairs.append((low, j))

    killed = {low for low, _ in pairs}
    bars = []
    for low, j in pairs:
        birth, death = values[u_entry[low]], values[w_entry[j]]
        if birth != death:
            bars.append(Bar(degree, birth, death))
    # Unpaired cycles live forever
    for i, is_positive in enumerate(positive):
        if is_positive and i not in killed:
            bars.append(Bar(degree, values[u_entry[i]], INF))
    diagram = PersistenceDiagram.from_bars(degree, bars)
    logger.info("H_%d diagram: %d bars (%d infinite)", degree, len(diagram), len(diagram.infinite))
    return diagram


def _low(field: ScalarField, column) -> int | None:
    for i in range(len(column) - 1, -1, -1):
        if not field.is_zero(column[i]):
            return i
    return None


def diagrams(filtered: FilteredComplex, degrees: Iterable[int], field: ScalarField | None = None, workers: int = 1) -> dict:
    """Diagrams for several degrees; degrees run in parallel when ``workers`` > 1."""
    degrees = list(degrees)
    if workers > 1 and len(degrees) > 1:
        results = Parallel(n_jobs=workers)(delayed(persistence_diagram)(filtered, d, field) for d in degrees)
    else:
        results = [persistence_diagram(filtered, d, field) for d in degrees]
    return dict(zip(degrees, results))


def betti_persistence_oracle(filtered: FilteredComplex, degree: int, i: int, j: int, field: ScalarField | None = None) -> int:
    """
    Rank of H_degree(snapshot i) -> H_degree(snapshot j) under inclusion,
    straight from the induced chain map (indices are 0-based).
    """
    if i > j:
        raise ValueError("i must not exceed j")
    field = field or ScalarField.rational()
    src = chain_complex(filtered.snapshots[i], degree, field, filtered.final.is_regular)
    dst = chain_complex(filtered.snapshots[j], degree, field, filtered.final.is_regular)
    inclusion = VertexMap.identity(filtered.final.vertices)
    matrix = homology_map(induced_chain_map(inclusion, src, dst), degree)[degree]
    return rank(matrix)


def bars_alive(diagram: PersistenceDiagram, delta_i, delta_j) -> int:
    """Number of bars born at or before δ_i that die after δ_j."""
    return sum(1 for birth, death in diagram.points if birth <= delta_i and death > delta_j)
