"""
Distortion functionals and stability bounds.

Every bound here is an exact Fraction: the right-hand side of one of the
stability inequalities d_B(D_p(G), D_p(H)) <= η for the edge-level
filtration of weighted digraphs and the path sublevel filtration of
weighted path complexes.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from main.errors import DomainError, MorphismError, UsageError
from main.topology.complexes import WeightedDigraph, WeightedPathComplex, grounded_truncation
from main.topology.filtration import path_length
from main.topology.homotopy import (
    HomotopyChain,
    VertexMap,
    is_digraph_map,
    is_weak_morphism,
    verify_digraph_chain,
    verify_weak_chain,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
HALF = Fraction(1, 2)
EXHAUSTIVE_LIMIT = 200_000


def _max(values) -> Fraction:
    return max(values, default=ZERO)


def dis_digraph(f: Mapping, g: WeightedDigraph, h: WeightedDigraph) -> Fraction:
    """max |w_H(f(x), f(x')) − w_G(x, x')| over edges whose image is an edge."""
    return _max(
        abs(h.weights[(f[u], f[v])] - w)
        for (u, v), w in g.weights.items()
        if (f[u], f[v]) in h.weights
    )


def cod_digraph(f: Mapping, g: Mapping, h: WeightedDigraph) -> Fraction:
    """max of w_H(f(x), g(x)) and w_H(g(x), f(x)) over the edges that exist."""
    values = []
    for x in f:
        for edge in ((f[x], g[x]), (g[x], f[x])):
            if edge in h.weights:
                values.append(abs(h.weights[edge]))
    return _max(values)


def dis_pc(f: Mapping, n: int, p: WeightedPathComplex, s: WeightedPathComplex) -> Fraction:
    """
    max |len(f(e)) − len(e)| over e ∈ P_n with regular image; dis_0 = 0.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return ZERO
    values = []
    for e in p.complex.allowed(n):
        image = e.relabel(f)
        if not image.is_regular():
            continue
        if image not in s.complex:
            raise MorphismError(f"image {image} of {e} is regular but not allowed")
        values.append(abs(path_length(image, s.weights) - path_length(e, p.weights)))
    return _max(values)


def cod_pc(f: Mapping, g: Mapping, s: WeightedPathComplex) -> Fraction:
    """Codistortion of two weak morphisms into ``s``, measured on its 1-path weights."""
    values = []
    for x in f:
        for edge in ((f[x], g[x]), (g[x], f[x])):
            if edge in s.weights:
                values.append(abs(s.weights[edge]))
    return _max(values)


def _chain_maps(chain) -> list:
    if isinstance(chain, HomotopyChain):
        return list(chain.maps)
    return list(chain or [])


def digraph_bound_terms(
    phi: VertexMap,
    psi: VertexMap,
    fchain: HomotopyChain | Sequence,
    gchain: HomotopyChain | Sequence,
    g: WeightedDigraph,
    h: WeightedDigraph,
) -> dict:
    """
    The six term families of the digraph stability bound.

    Interior distortions range over k = 1..m-1 and codistortions over
    k = 1..m.

    Args:
        phi: Digraph map G -> H
        psi: Digraph map H -> G
        fchain: Maps f_0 = ψφ, ..., f_m = id_G, or a verified HomotopyChain
        gchain: Maps g_0 = φψ, ..., g_m = id_H, or a verified HomotopyChain
        g: First weighted digraph
        h: Second weighted digraph

    Returns:
        dict: Term name -> value; the bound is the largest value
    """
    if not is_digraph_map(phi, g, h):
        raise MorphismError("φ is not a digraph map G -> H")
    if not is_digraph_map(psi, h, g):
        raise MorphismError("ψ is not a digraph map H -> G")
    f_maps = verify_digraph_chain(
        _chain_maps(fchain), g, g, start=psi.compose(phi), end=VertexMap.identity(g.vertices)
    ).maps
    g_maps = verify_digraph_chain(
        _chain_maps(gchain), h, h, start=phi.compose(psi), end=VertexMap.identity(h.vertices)
    ).maps
    terms = {
        "dis(phi)": dis_digraph(phi, g, h),
        "dis(psi)": dis_digraph(psi, h, g),
        "dis(f_k)/2": HALF * _max(dis_digraph(f_maps[k], g, g) for k in range(1, len(f_maps) - 1)),
        "dis(g_k)/2": HALF * _max(dis_digraph(g_maps[k], h, h) for k in range(1, len(g_maps) - 1)),
        "cod(f_k-1,f_k)/2": HALF * _max(cod_digraph(f_maps[k - 1], f_maps[k], g) for k in range(1, len(f_maps))),
        "cod(g_k-1,g_k)/2": HALF * _max(cod_digraph(g_maps[k - 1], g_maps[k], h) for k in range(1, len(g_maps))),
    }
    logger.debug("digraph bound terms: %s", terms)
    return terms


def stability_bound_digraph(phi, psi, fchain, gchain, g: WeightedDigraph, h: WeightedDigraph) -> Fraction:
    """Upper bound on d_B between the edge-filtration diagrams of g and h, in every degree."""
    return max(digraph_bound_terms(phi, psi, fchain, gchain, g, h).values())


def _restrict_map(f: Mapping, domain, codomain) -> VertexMap:
    missing = sorted(v for v in domain if v not in f)
    if missing:
        raise DomainError(f"map has no image for {missing}")
    return VertexMap({v: f[v] for v in domain}, domain, set(codomain) | {f[v] for v in domain})


def pc_bound_terms(
    phi: Mapping,
    psi: Mapping,
    fchain,
    gchain,
    p: WeightedPathComplex,
    s: WeightedPathComplex,
    deg: int,
) -> dict:
    """
    The four term families of the path-complex stability bound, evaluated on
    the grounded truncations P̄ = Δ(P_deg ∪ P_deg+1) and S̄.

    Maps given on the full vertex sets are restricted to the truncations.

    Args:
        phi: Weak morphism P -> S
        psi: Weak morphism S -> P
        fchain: Maps from ψφ to id_P
        gchain: Maps from φψ to id_S
        p: First weighted path complex
        s: Second weighted path complex
        deg: Homology degree the bound is for

    Returns:
        dict: Term name -> value
    """
    if deg < 0:
        raise ValueError("degree must be non-negative")
    # Only P_deg and P_deg+1 matter for H_deg
    p_bar_complex = grounded_truncation(p.complex, deg)
    s_bar_complex = grounded_truncation(s.complex, deg)
    p_bar = p.restricted_to(p_bar_complex)
    s_bar = s.restricted_to(s_bar_complex)
    pv, sv = p_bar_complex.vertices, s_bar_complex.vertices

    phi = _restrict_map(phi, pv, sv)
    psi = _restrict_map(psi, sv, pv)
    if not is_weak_morphism(phi, p_bar, s_bar):
        raise MorphismError("φ is not a weak morphism between the grounded truncations")
    if not is_weak_morphism(psi, s_bar, p_bar):
        raise MorphismError("ψ is not a weak morphism between the grounded truncations")
    f_maps = verify_weak_chain(
        [_restrict_map(m, pv, pv) for m in _chain_maps(fchain)],
        p_bar, p_bar,
        start=psi.compose(phi), end=VertexMap.identity(pv),
    ).maps
    g_maps = verify_weak_chain(
        [_restrict_map(m, sv, sv) for m in _chain_maps(gchain)],
        s_bar, s_bar,
        start=phi.compose(psi), end=VertexMap.identity(sv),
    ).maps

    # Each link pays for the distortion split across degrees plus its codistortion
    def link_term(maps, space):
        values = []
        for k in range(1, len(maps)):
            spread = max(
                dis_pc(maps[k - 1], l, space, space) + dis_pc(maps[k], deg - l, space, space)
                for l in range(deg + 1)
            )
            values.append(spread + cod_pc(maps[k - 1], maps[k], space))
        return HALF * _max(values)

    terms = {
        "dis_i(phi)": _max(dis_pc(phi, i, p_bar, s_bar) for i in range(1, deg + 2)),
        "dis_i(psi)": _max(dis_pc(psi, i, s_bar, p_bar) for i in range(1, deg + 2)),
        "f-links/2": link_term(f_maps, p_bar),
        "g-links/2": link_term(g_maps, s_bar),
    }
    logger.debug("path complex bound terms (deg %d): %s", deg, terms)
    return terms


def stability_bound_pc(phi, psi, fchain, gchain, p: WeightedPathComplex, s: WeightedPathComplex, deg: int) -> Fraction:
    return max(pc_bound_terms(phi, psi, fchain, gchain, p, s, deg).values())


def weight_perturbation_bound(g: WeightedDigraph, g_prime: WeightedDigraph) -> Fraction:
    """Same digraph, two weightings: max over edges of |w_G − w_G'|."""
    if g.graph != g_prime.graph:
        raise DomainError("weight perturbation needs the same underlying digraph")
    return _max(abs(w - g_prime.weights[e]) for e, w in g.weights.items())


def length_perturbation_bound(p: WeightedPathComplex, p_prime: WeightedPathComplex, top: int | None = None) -> Fraction:
    """Same path complex, two weightings: max over allowed paths of |len_P − len_P'|."""
    if p.complex != p_prime.complex:
        raise DomainError("length perturbation needs the same underlying path complex")
    top = p.complex.top_degree if top is None else top
    return _max(
        abs(path_length(e, p.weights) - path_length(e, p_prime.weights))
        for n in range(1, top + 1)
        for e in p.complex.allowed(n)
    )


def _require_complete(g: WeightedDigraph, name: str):
    n = len(g.vertices)
    if len(g.edges) != n * (n - 1):
        raise DomainError(f"{name} is not a complete digraph")


def complete_digraph_bound(phi: VertexMap, psi: VertexMap, g: WeightedDigraph, h: WeightedDigraph) -> Fraction:
    """
    Bound for complete digraphs: any φ, ψ work, with the one-link chains
    ψφ ≃ id_G and φψ ≃ id_H.
    """
    _require_complete(g, "G")
    _require_complete(h, "H")
    id_g, id_h = VertexMap.identity(g.vertices), VertexMap.identity(h.vertices)
    fchain = [psi.compose(phi), id_g]
    gchain = [phi.compose(psi), id_h]
    verify_digraph_chain(fchain, g, g, start=psi.compose(phi), end=id_g)
    verify_digraph_chain(gchain, h, h, start=phi.compose(psi), end=id_h)
    return max(
        dis_digraph(phi, g, h),
        dis_digraph(psi, h, g),
        HALF * cod_digraph(fchain[0], id_g, g),
        HALF * cod_digraph(gchain[0], id_h, h),
    )


def best_complete_digraph_bound(g: WeightedDigraph, h: WeightedDigraph):
    """
    Tightest complete-digraph bound over every pair of vertex maps.

    Exhaustive; refuses instances with more than EXHAUSTIVE_LIMIT pairs.

    Returns:
        tuple: (bound, φ, ψ)
    """
    _require_complete(g, "G")
    _require_complete(h, "H")
    gv, hv = sorted(g.vertices), sorted(h.vertices)
    count = len(hv) ** len(gv) * len(gv) ** len(hv)
    if count > EXHAUSTIVE_LIMIT:
        raise UsageError(f"{count} map pairs exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}")
    best = None
    for phi_images in product(hv, repeat=len(gv)):
        phi = VertexMap(dict(zip(gv, phi_images)), gv, hv)
        for psi_images in product(gv, repeat=len(hv)):
            psi = VertexMap(dict(zip(hv, psi_images)), hv, gv)
            value = complete_digraph_bound(phi, psi, g, h)
            if best is None or value < best[0]:
                best = (value, phi, psi)
    return best
