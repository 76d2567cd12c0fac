"""
Vertex maps, digraph maps, weak morphisms and their one-step homotopies.

Homotopy chains are never searched for: callers supply the maps
f_0, ..., f_m and the functions here verify each link.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from main.algebra.pathcore import ElementaryPath
from main.errors import ChainEndpointError, DomainError, HomotopyVerificationError, MorphismError
from main.topology.complexes import Digraph, PathComplex, WeightedDigraph, WeightedPathComplex, truncation_closure

logger = logging.getLogger(__name__)

PRIME = "'"
PRODUCT_DELIMITERS = "(,)"


class VertexMap(Mapping):
    """A total map between two finite vertex sets."""

    def __init__(self, assignment: Mapping, domain: Iterable | None = None, codomain: Iterable | None = None):
        table = {str(k): str(v) for k, v in dict(assignment).items()}
        domain = frozenset(str(v) for v in domain) if domain is not None else frozenset(table)
        codomain = frozenset(str(v) for v in codomain) if codomain is not None else frozenset(table.values())
        missing = sorted(domain - table.keys())
        if missing:
            raise DomainError(f"map is not total: no image for {missing}")
        extra = sorted(table.keys() - domain)
        if extra:
            raise DomainError(f"map assigns vertices outside its domain: {extra}")
        stray = sorted({v for v in table.values()} - codomain)
        if stray:
            raise DomainError(f"images {stray} lie outside the codomain")
        self._table = table
        self.domain = domain
        self.codomain = codomain

    @classmethod
    def identity(cls, vertices: Iterable) -> "VertexMap":
        vertices = [str(v) for v in vertices]
        return cls({v: v for v in vertices}, vertices, vertices)

    @classmethod
    def constant(cls, domain: Iterable, target, codomain: Iterable | None = None) -> "VertexMap":
        domain = [str(v) for v in domain]
        codomain = codomain if codomain is not None else [target]
        return cls({v: str(target) for v in domain}, domain, codomain)

    def __getitem__(self, vertex):
        return self._table[vertex]

    def __iter__(self):
        return iter(sorted(self._table))

    def __len__(self):
        return len(self._table)

    def __hash__(self):
        return hash((tuple(sorted(self._table.items())), self.domain, self.codomain))

    def __repr__(self):
        pairs = ", ".join(f"{k}->{v}" for k, v in sorted(self._table.items()))
        return f"VertexMap({pairs})"

    def compose(self, inner: "VertexMap") -> "VertexMap":
        """``self ∘ inner``: apply ``inner`` first."""
        if not inner.codomain <= self.domain:
            raise DomainError("inner map's codomain is not contained in the outer map's domain")
        return VertexMap({v: self[inner[v]] for v in inner.domain}, inner.domain, self.codomain)

    def restrict(self, domain: Iterable, codomain: Iterable | None = None) -> "VertexMap":
        domain = [str(v) for v in domain]
        return VertexMap({v: self[v] for v in domain}, domain, codomain if codomain is not None else self.codomain)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self._table.items())


def _digraph(g) -> Digraph:
    return g.graph if isinstance(g, WeightedDigraph) else g


def _complex(p) -> PathComplex:
    return p.complex if isinstance(p, WeightedPathComplex) else p


def is_digraph_map(f: Mapping, g, h) -> bool:
    """Every edge of ``g`` goes to an edge of ``h`` or collapses to a vertex."""
    g, h = _digraph(g), _digraph(h)
    for v in g.vertices:
        if v not in f:
            raise DomainError(f"vertex {v!r} has no image")
        if f[v] not in h.vertices:
            return False
    return all(f[u] == f[v] or (f[u], f[v]) in h.edges for u, v in g.edges)


def interval_digraph() -> Digraph:
    """The digraph I: two vertices 0 and 1 with the edge 0 -> 1."""
    return Digraph.from_edges([("0", "1")])


def product_vertex(x, y) -> str:
    return f"({x},{y})"


def _check_product_ids(g: Digraph):
    # "(a,b)" labels stay unambiguous only while factor ids avoid the delimiters
    bad = sorted(v for v in g.vertices if any(c in v for c in PRODUCT_DELIMITERS))
    if bad:
        raise DomainError(f"vertex ids {bad} contain one of {PRODUCT_DELIMITERS!r}; product labels would collide")


def digraph_product(gx, gy) -> Digraph:
    """Box product: (x,y) -> (x',y') iff x = x' and y -> y', or y = y' and x -> x'."""
    gx, gy = _digraph(gx), _digraph(gy)
    _check_product_ids(gx)
    _check_product_ids(gy)
    product = nx.cartesian_product(gx.to_networkx(), gy.to_networkx())
    product = nx.relabel_nodes(product, {node: product_vertex(*node) for node in product.nodes})
    return Digraph.from_networkx(product)


def product_homotopy(f: Mapping, g: Mapping, src) -> VertexMap:
    """The map F on G × I with F(x, 0) = f(x) and F(x, 1) = g(x)."""
    src = _digraph(src)
    _check_product_ids(src)
    table = {}
    for x in src.vertices:
        table[product_vertex(x, "0")] = f[x]
        table[product_vertex(x, "1")] = g[x]
    return VertexMap(table)


def one_step_homotopic_digraph(f: Mapping, g: Mapping, src, dst) -> bool:
    """f(x) ⇒̄ g(x) for every x, or g(x) ⇒̄ f(x) for every x."""
    src, dst = _digraph(src), _digraph(dst)
    for name, m in (("f", f), ("g", g)):
        if not is_digraph_map(m, src, dst):
            raise MorphismError(f"{name} is not a digraph map")

    def arrows(a, b):
        return all(a[x] == b[x] or (a[x], b[x]) in dst.edges for x in src.vertices)

    return arrows(f, g) or arrows(g, f)


def is_weak_morphism(f: Mapping, p, s) -> bool:
    """Every allowed path of ``p`` maps to an allowed path of ``s`` or to a non-regular path."""
    p, s = _complex(p), _complex(s)
    for path in p.all_paths():
        image = path.relabel(f)
        if image.is_regular() and image not in s:
            logger.debug("weak morphism check failed: %s -> %s", path, image)
            return False
    return True


def primed(vertex: str) -> str:
    return f"{vertex}{PRIME}"


def product_with_I(p) -> PathComplex:
    """
    P × I on V ∪ V': P, the primed copy P', and for every allowed path
    i_0...i_n and 0 <= k <= n the path i_0...i_k i_k'...i_n'.
    """
    p = _complex(p)
    clash = sorted(v for v in p.vertices if primed(v) in p.vertices)
    if clash:
        raise DomainError(f"primed copies of {clash} already exist in the vertex set")
    paths = set()
    for path in p.all_paths():
        vs = path.vertices
        paths.add(path)
        paths.add(ElementaryPath(tuple(primed(v) for v in vs)))
        for k in range(len(vs)):
            paths.add(ElementaryPath(vs[: k + 1] + tuple(primed(v) for v in vs[k:])))
    vertices = set(p.vertices) | {primed(v) for v in p.vertices}
    return truncation_closure(paths, vertices)


def canonical_homotopy(f: Mapping, g: Mapping, p) -> VertexMap:
    """F on V ∪ V' with F = f on V and F(v') = g(v)."""
    p = _complex(p)
    table = {}
    for v in p.vertices:
        table[v] = f[v]
        table[primed(v)] = g[v]
    return VertexMap(table)


def one_step_weak_homotopic(f: Mapping, g: Mapping, p, s) -> bool:
    """
    Sufficient check: the canonical F (in either order) is a weak
    morphism P × I -> S.

    False means "not certified", not "not homotopic".
    """
    p, s = _complex(p), _complex(s)
    for name, m in (("f", f), ("g", g)):
        if not is_weak_morphism(m, p, s):
            logger.warning("%s is not a weak morphism; homotopy not certified", name)
            return False
    cylinder = product_with_I(p)
    if is_weak_morphism(canonical_homotopy(f, g, p), cylinder, s):
        return True
    return is_weak_morphism(canonical_homotopy(g, f, p), cylinder, s)


@dataclass(frozen=True)
class HomotopyChain:
    """Verified maps f_0, ..., f_m with consecutive maps one-step homotopic."""

    maps: tuple
    kind: str = "digraph"

    @property
    def length(self) -> int:
        return len(self.maps) - 1

    def links(self):
        """Consecutive pairs (k, f_{k-1}, f_k) for k = 1..m."""
        for k in range(1, len(self.maps)):
            yield k, self.maps[k - 1], self.maps[k]


def _check_endpoints(maps: Sequence[Mapping], start, end):
    if start is not None and dict(maps[0]) != dict(start):
        raise ChainEndpointError("the first map of the chain is not the expected composite")
    if end is not None and dict(maps[-1]) != dict(end):
        raise ChainEndpointError("the last map of the chain is not the identity")


def verify_digraph_chain(maps: Sequence[Mapping], src, dst, start=None, end=None) -> HomotopyChain:
    """
    Check every link f_{k-1} ≃ f_k of a digraph homotopy chain.

    Args:
        maps: f_0, ..., f_m; an empty list stands for [start]
        src: Domain digraph of every map
        dst: Codomain digraph of every map
        start: Required f_0, when given
        end: Required f_m, when given

    Returns:
        HomotopyChain: The verified maps

    Raises:
        HomotopyVerificationError: naming the first failing link k.
        ChainEndpointError: when f_0 or f_m is not the expected map.
    """
    maps = list(maps) or ([start] if start is not None else [])
    if not maps:
        raise ChainEndpointError("empty homotopy chain")
    _check_endpoints(maps, start, end)
    for k, m in enumerate(maps):
        if not is_digraph_map(m, src, dst):
            raise HomotopyVerificationError(f"link {k}: f_{k} is not a digraph map", link=k)
    for k in range(1, len(maps)):
        if not one_step_homotopic_digraph(maps[k - 1], maps[k], src, dst):
            raise HomotopyVerificationError(
                f"link {k}: f_{k - 1} and f_{k} are not one-step homotopic", link=k
            )
    logger.debug("verified digraph chain of length %d", len(maps) - 1)
    return HomotopyChain(tuple(maps), "digraph")


def verify_weak_chain(maps: Sequence[Mapping], p, s, start=None, end=None) -> HomotopyChain:
    """Weak-morphism counterpart of ``verify_digraph_chain`` using the canonical homotopy."""
    maps = list(maps) or ([start] if start is not None else [])
    if not maps:
        raise ChainEndpointError("empty homotopy chain")
    _check_endpoints(maps, start, end)
    for k, m in enumerate(maps):
        if not is_weak_morphism(m, p, s):
            raise HomotopyVerificationError(f"link {k}: f_{k} is not a weak morphism", link=k)
    for k in range(1, len(maps)):
        if not one_step_weak_homotopic(maps[k - 1], maps[k], p, s):
            raise HomotopyVerificationError(
                f"link {k}: one-step weak homotopy f_{k - 1} ~ f_{k} not certified", link=k
            )
    logger.debug("verified weak chain of length %d", len(maps) - 1)
    return HomotopyChain(tuple(maps), "weak")
