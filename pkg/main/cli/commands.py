"""
Command implementations.

Each ``cmd_*`` takes a RunConfig and returns a result dict with at least
``success`` and ``message``; failures also carry ``code`` and
``exit_code``. Printing is left to the caller.
"""

from __future__ import annotations

import logging
from functools import wraps
from pathlib import Path

from main.errors import DegreeError, ModeMismatchError, PathHomologyError, StabilityViolationError, UsageError
from main.formats.diagram_files import read_dgm, render_dgm
from main.formats.graph_files import read_vmap, read_wdg, read_wpc
from main.formats.numbers import format_number
from main.topology.bottleneck import bottleneck_distance, matching_cost, optimal_matching, pair_cost, diagonal_cost
from main.topology.complexes import WeightedDigraph, path_complex_from_digraph
from main.topology.filtration import EDGE, PATH, edge_filtration, edge_sublevel, path_filtration, path_sublevel
from main.topology.homology import homology_dims
from main.topology.homotopy import VertexMap
from main.topology.persistence import persistence_diagram
from main.topology.stability import (
    best_complete_digraph_bound,
    complete_digraph_bound,
    digraph_bound_terms,
    pc_bound_terms,
)
from main.cli.config import RunConfig
from main.cli.perturbation import run_trials
from main.cli.visualization import diagram_figure, save_figure

logger = logging.getLogger(__name__)

SUFFIX_KIND = {".wdg": EDGE, ".wpc": PATH}
PLOT_SUFFIXES = (".svg", ".pdf", ".png", ".html")


def _result(fn):
    """Turn toolkit errors into failure dicts."""

    @wraps(fn)
    def wrapper(config: RunConfig):
        try:
            return fn(config)
        except PathHomologyError as exc:
            return {
                "success": False,
                "message": str(exc),
                "code": exc.code,
                "exit_code": 2 if isinstance(exc, UsageError) else 1,
            }
        except OSError as exc:
            return {"success": False, "message": str(exc), "code": "io", "exit_code": 1}

    return wrapper


def _require_inputs(config: RunConfig, count: int):
    if len(config.inputs) != count:
        raise UsageError(f"expected {count} input file(s), got {len(config.inputs)}")


def input_kind(path: Path, requested: str | None) -> str:
    kind = SUFFIX_KIND.get(Path(path).suffix.lower())
    if kind is None:
        raise UsageError(f"{path}: unknown input type (expected .wdg or .wpc)")
    if requested is not None and requested != kind:
        needed = "a .wdg digraph" if requested == EDGE else "a .wpc path complex"
        raise UsageError(f"--filtration {requested} needs {needed}; got {path}")
    return kind


def load_input(path: Path):
    """Read a .wdg or .wpc file, chosen by suffix."""
    return read_wdg(path) if Path(path).suffix.lower() == ".wdg" else read_wpc(path)


def build_diagram(source, dim: int, field):
    """
    H_dim diagram of a weighted digraph (edge filtration) or path complex (length filtration).

    Args:
        source: WeightedDigraph or WeightedPathComplex
        dim: Homology degree
        field: Coefficient field

    Returns:
        PersistenceDiagram: The diagram in degree dim
    """
    if isinstance(source, WeightedDigraph):
        return persistence_diagram(edge_filtration(source, dim + 1), dim, field)
    return persistence_diagram(path_filtration(source, dim + 1), dim, field)


def _emit(text: str, out: Path | None) -> str:
    if out is None:
        return text.rstrip("\n")
    Path(out).write_text(text, encoding="utf-8")
    return f"wrote {out}"


@_result
def cmd_diagram(config: RunConfig) -> dict:
    _require_inputs(config, 1)
    path = config.inputs[0]
    input_kind(path, config.filtration)
    diagram = build_diagram(load_input(path), config.dim, config.scalar_field)
    logger.info("%s: %d bars in degree %d", path, len(diagram.points), config.dim)
    text = render_dgm(diagram, config.scalar_field)
    return {"success": True, "message": _emit(text, config.out), "diagram": diagram, "text": text}


def _render_matching(matching) -> list:
    lines = []
    for x, y in matching.pairs:
        lines.append(
            f"pair ({format_number(x[0])}, {format_number(x[1])}) -> "
            f"({format_number(y[0])}, {format_number(y[1])}) cost {format_number(pair_cost(x, y))}"
        )
    for side, points in (("first", matching.unmatched_first), ("second", matching.unmatched_second)):
        for x in points:
            lines.append(
                f"diagonal {side} ({format_number(x[0])}, {format_number(x[1])}) "
                f"cost {format_number(diagonal_cost(x))}"
            )
    return lines


@_result
def cmd_bottleneck(config: RunConfig) -> dict:
    """d_B of two .dgm files, with the optimal matching under ``witness``."""
    _require_inputs(config, 2)
    d1, field1 = read_dgm(config.inputs[0])
    d2, field2 = read_dgm(config.inputs[1])
    if field1 != field2:
        raise ModeMismatchError(
            f"diagrams were computed over different fields: {field1.label} vs {field2.label}"
        )
    if config.witness:
        distance, matching = optimal_matching(d1, d2)
        lines = [format_number(distance)] + _render_matching(matching)
        return {
            "success": True,
            "message": "\n".join(lines),
            "distance": distance,
            "matching": matching,
            "cost": matching_cost(matching),
        }
    distance = bottleneck_distance(d1, d2)
    return {"success": True, "message": format_number(distance), "distance": distance}


def _load_map(path, vertices, domain, codomain) -> VertexMap:
    if path is None:
        if set(vertices) != set(codomain):
            raise UsageError("vertex sets differ; pass --phi/--psi map files")
        return VertexMap.identity(vertices)
    return read_vmap(path, domain, codomain)


def _arrows(f: VertexMap) -> str:
    return " ".join(f"{k}->{f[k]}" for k in sorted(f))


def _chain(files, vertices, first: VertexMap) -> list:
    """Chain maps from files, or the one-link chain first ≃ id (just id when they agree)."""
    maps = [read_vmap(f, vertices, vertices) for f in files]
    if maps:
        return maps
    identity = VertexMap.identity(vertices)
    return [identity] if first.is_identity() else [first, identity]


@_result
def cmd_bound(config: RunConfig) -> dict:
    """
    Evaluate the stability bound η for the given maps and chains; with
    ``check``, also compute d_B of the two diagrams and require d_B <= η.

    ``complete`` without map files searches every vertex-map pair for the
    smallest complete-digraph bound.

    Args:
        config: Run configuration with two inputs of the same kind

    Returns:
        dict: Result with the bound, its terms and, under ``check``, the distance
    """
    _require_inputs(config, 2)
    kinds = {input_kind(p, config.filtration) for p in config.inputs}
    if len(kinds) != 1:
        raise UsageError("both inputs must be of the same kind")
    g, h = load_input(config.inputs[0]), load_input(config.inputs[1])
    if config.complete and not isinstance(g, WeightedDigraph):
        raise UsageError("--complete applies to weighted digraphs only")
    gv, hv = sorted(g.vertices), sorted(h.vertices)
    lines = []

    # Exhaustive search when no maps were given
    if config.complete and config.phi is None and config.psi is None:
        bound, phi, psi = best_complete_digraph_bound(g, h)
        terms = {"complete": bound}
        lines += [f"phi {_arrows(phi)}", f"psi {_arrows(psi)}"]
    else:
        phi = _load_map(config.phi, gv, gv, hv)
        psi = _load_map(config.psi, hv, hv, gv)
        if config.complete:
            terms = {"complete": complete_digraph_bound(phi, psi, g, h)}
        else:
            # Chains default to the single link ψφ ≃ id
            fchain = _chain(config.fchain, gv, psi.compose(phi))
            gchain = _chain(config.gchain, hv, phi.compose(psi))
            if isinstance(g, WeightedDigraph):
                terms = digraph_bound_terms(phi, psi, fchain, gchain, g, h)
            else:
                terms = pc_bound_terms(phi, psi, fchain, gchain, g, h, config.dim)

    bound = max(terms.values())
    logger.info("bound %s from %d terms", format_number(bound), len(terms))
    lines = [f"bound {format_number(bound)}"] + [f"  {name} {format_number(v)}" for name, v in terms.items()] + lines
    result = {"success": True, "bound": bound, "terms": terms}
    if config.check:
        # Both diagrams come from the same degree and field
        field = config.scalar_field
        distance = bottleneck_distance(build_diagram(g, config.dim, field), build_diagram(h, config.dim, field))
        lines.append(f"bottleneck {format_number(distance)}")
        result["distance"] = distance
        if distance > bound:
            raise StabilityViolationError(
                f"d_B {format_number(distance)} exceeds bound {format_number(bound)}", seed=config.seed
            )
        lines.append("d_B <= bound: yes")
    result["message"] = "\n".join(lines)
    return result


@_result
def cmd_perturb(config: RunConfig) -> dict:
    _require_inputs(config, 1)
    path = config.inputs[0]
    input_kind(path, config.filtration)
    report = run_trials(
        load_input(path),
        config.dim,
        config.eps,
        config.trials,
        seed=config.seed,
        field=config.scalar_field,
        workers=config.workers,
        quiet=config.quiet,
    )
    if config.out is not None:
        report.to_csv(config.out, index=False)
    max_ratio = float(report["ratio"].max()) if len(report) else 0.0
    lines = [
        f"trials {len(report)}",
        "violations 0",
        f"max ratio {max_ratio:.6f}",
    ]
    if config.out is not None:
        lines.append(f"wrote {config.out}")
    return {"success": True, "message": "\n".join(lines), "report": report, "max_ratio": max_ratio}


@_result
def cmd_plot(config: RunConfig) -> dict:
    """Plot a .dgm file; the output type follows the suffix of ``out`` (SVG by default)."""
    _require_inputs(config, 1)
    path = Path(config.inputs[0])
    diagram, _ = read_dgm(path)
    out = Path(config.out or path.with_suffix(".svg"))
    if out.suffix.lower() not in PLOT_SUFFIXES:
        raise UsageError(f"cannot plot to {out}; use one of {', '.join(PLOT_SUFFIXES)}")
    save_figure(diagram_figure(diagram, title=path.stem), out)
    return {"success": True, "message": f"wrote {out}", "output": out}


@_result
def cmd_homology(config: RunConfig) -> dict:
    """dim H_0..H_dim of the input, or of its snapshot at ``delta``."""
    _require_inputs(config, 1)
    path = config.inputs[0]
    input_kind(path, config.filtration)
    source = load_input(path)
    if isinstance(source, WeightedDigraph):
        graph = source.graph if config.delta is None else edge_sublevel(source, config.delta)
        complex_ = path_complex_from_digraph(graph, config.dim + 1)
    else:
        complex_ = source.complex if config.delta is None else path_sublevel(source, config.delta)
    dims = homology_dims(complex_, config.dim, config.scalar_field)
    if len(dims) != config.dim + 1:
        raise DegreeError("homology dimensions are incomplete")
    lines = [f"H_{n} {d}" for n, d in enumerate(dims)]
    return {"success": True, "message": "\n".join(lines), "dims": dims}


COMMANDS = {
    "diagram": cmd_diagram,
    "bottleneck": cmd_bottleneck,
    "bound": cmd_bound,
    "perturb": cmd_perturb,
    "plot": cmd_plot,
    "homology": cmd_homology,
}
