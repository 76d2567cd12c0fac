"""
Readers and writers for the text input formats.

.wdg   weighted digraph: ``v <id>`` and ``e <src> <dst> <weight>`` lines
.wpc   weighted path complex: ``closure auto|strict``, ``p <v0> ... <vk>``
       and ``w <u> <v> <weight>`` lines
.vmap  vertex map: ``<src-vertex> <dst-vertex>`` lines

``#`` starts a comment. Weights are positive decimals or fractions and
are read exactly.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from main.algebra.pathcore import ElementaryPath
from main.errors import DomainError, ParseError, WeightDomainError
from main.formats.numbers import format_number
from main.topology.complexes import (
    PathComplex,
    WeightedDigraph,
    WeightedPathComplex,
    truncation_closure,
    validate,
)
from main.topology.homotopy import VertexMap

CLOSURE_MODES = ("auto", "strict")


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def read_source(path) -> str:
    """
    Read an input file as UTF-8 text.

    Args:
        path: File to read

    Returns:
        str: The file contents
    """
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text (byte {exc.start})", str(path)) from None


def parse_weight(token: str, source: str, line: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"weight {token!r} is not a decimal or fraction", source, line) from None
    if value <= 0:
        raise ParseError(f"weight {token} must be positive", source, line)
    return value


def parse_wdg(text: str, source: str = "<wdg>") -> WeightedDigraph:
    """
    Parse the text of a .wdg file.

    Args:
        text: File contents
        source: Name used in error messages

    Returns:
        WeightedDigraph: The digraph with exact weights
    """
    vertices, weights = set(), {}
    for number, tokens in _lines(text):
        kind = tokens[0]
        if kind == "v" and len(tokens) == 2:
            vertices.add(tokens[1])
        elif kind == "e" and len(tokens) == 4:
            u, v = tokens[1], tokens[2]
            if u == v:
                raise ParseError(f"self-loop at {u}", source, number)
            if (u, v) in weights:
                raise ParseError(f"duplicate edge {u} {v}", source, number)
            weights[(u, v)] = parse_weight(tokens[3], source, number)
        else:
            raise ParseError(f"cannot read line {' '.join(tokens)!r}", source, number)
    return WeightedDigraph.from_weighted_edges(
        [(u, v, w) for (u, v), w in weights.items()], vertices
    )


def read_wdg(path) -> WeightedDigraph:
    path = Path(path)
    return parse_wdg(read_source(path), str(path))


def render_wdg(g: WeightedDigraph) -> str:
    lines = [f"v {v}" for v in sorted(g.vertices)]
    lines += [f"e {u} {v} {format_number(w)}" for (u, v), w in sorted(g.weights.items())]
    return "\n".join(lines) + "\n"


def write_wdg(g: WeightedDigraph, path) -> Path:
    path = Path(path)
    path.write_text(render_wdg(g), encoding="utf-8")
    return path


def parse_wpc(text: str, source: str = "<wpc>") -> WeightedPathComplex:
    """
    Auto mode closes the declared paths under truncation; strict mode
    rejects a path set that is not already closed. Either way every
    allowed 1-path needs exactly one weight.
    """
    mode = "strict"
    paths, weights = [], {}
    for number, tokens in _lines(text):
        kind = tokens[0]
        if kind == "closure" and len(tokens) == 2:
            if tokens[1] not in CLOSURE_MODES:
                raise ParseError(f"closure mode must be auto or strict, got {tokens[1]!r}", source, number)
            mode = tokens[1]
        elif kind == "p" and len(tokens) >= 2:
            paths.append(ElementaryPath(tuple(tokens[1:])))
        elif kind == "w" and len(tokens) == 4:
            edge = (tokens[1], tokens[2])
            if edge in weights:
                raise ParseError(f"duplicate weight for {edge[0]} {edge[1]}", source, number)
            weights[edge] = parse_weight(tokens[3], source, number)
        else:
            raise ParseError(f"cannot read line {' '.join(tokens)!r}", source, number)

    if mode == "auto":
        complex_ = truncation_closure(paths)
    else:
        complex_ = PathComplex.from_paths(paths)
        report = validate(complex_)
        if not report.ok:
            raise ParseError(f"path set is not truncation-closed: {report.describe()}", source)
    try:
        return WeightedPathComplex(complex_, weights)
    except WeightDomainError as exc:
        raise ParseError(str(exc), source) from None


def read_wpc(path) -> WeightedPathComplex:
    path = Path(path)
    return parse_wpc(read_source(path), str(path))


def render_wpc(p: WeightedPathComplex) -> str:
    lines = ["closure strict"]
    lines += [f"p {path}" for path in p.complex.all_paths()]
    lines += [f"w {u} {v} {format_number(w)}" for (u, v), w in sorted(p.weights.items())]
    return "\n".join(lines) + "\n"


def write_wpc(p: WeightedPathComplex, path) -> Path:
    path = Path(path)
    path.write_text(render_wpc(p), encoding="utf-8")
    return path


def parse_vmap(text: str, source: str = "<vmap>", domain=None, codomain=None) -> VertexMap:
    """
    Parse the text of a .vmap file.

    Args:
        text: File contents
        source: Name used in error messages
        domain: Vertices that must all be mapped (the mapped vertices when omitted)
        codomain: Vertices the images must lie in (the images when omitted)

    Returns:
        VertexMap: The total map
    """
    table = {}
    for number, tokens in _lines(text):
        if len(tokens) != 2:
            raise ParseError("expected '<src-vertex> <dst-vertex>'", source, number)
        if tokens[0] in table:
            raise ParseError(f"vertex {tokens[0]} is mapped twice", source, number)
        table[tokens[0]] = tokens[1]
    try:
        return VertexMap(table, domain, codomain)
    except DomainError as exc:
        raise ParseError(str(exc), source) from None


def read_vmap(path, domain=None, codomain=None) -> VertexMap:
    path = Path(path)
    return parse_vmap(read_source(path), str(path), domain, codomain)


def render_vmap(f: VertexMap) -> str:
    return "".join(f"{k} {f[k]}\n" for k in f)
