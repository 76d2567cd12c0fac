"""
Persistence diagram files (.dgm).

    # dim=1 field=rat
    0 inf
    1/3 2.5

One bar per line, sorted by (birth, death); ``inf`` is an infinite death.
"""

from __future__ import annotations

import math
from pathlib import Path

from main.algebra.linalg import ScalarField
from main.errors import FieldError, ParseError
from main.formats.graph_files import read_source
from main.formats.numbers import format_number, parse_number
from main.topology.persistence import PersistenceDiagram


def render_dgm(diagram: PersistenceDiagram, field: ScalarField | None = None) -> str:
    field = field or ScalarField.rational()
    lines = [f"# dim={diagram.degree} field={field.label}"]
    lines += [f"{format_number(b)} {format_number(d)}" for b, d in diagram.points]
    return "\n".join(lines) + "\n"


def write_dgm(diagram: PersistenceDiagram, path, field: ScalarField | None = None) -> Path:
    path = Path(path)
    path.write_text(render_dgm(diagram, field), encoding="utf-8")
    return path


def _header(line: str, source: str, number: int) -> dict:
    fields = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key] = value
    if "dim" not in fields or "field" not in fields:
        raise ParseError("header must read '# dim=<p> field=<rat|Fq>'", source, number)
    try:
        degree = int(fields["dim"])
        field = ScalarField.parse(fields["field"])
    except (ValueError, FieldError) as exc:
        raise ParseError(f"bad header: {exc}", source, number) from None
    if degree < 0:
        raise ParseError("dim must be non-negative", source, number)
    return {"degree": degree, "field": field}


def parse_dgm(text: str, source: str = "<dgm>"):
    """
    Returns:
        tuple: (PersistenceDiagram, ScalarField)
    """
    header = None
    points = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None and "dim=" in line:
                header = _header(line, source, number)
            continue
        if header is None:
            raise ParseError("missing '# dim=<p> field=<rat|Fq>' header", source, number)
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError("expected '<birth> <death>'", source, number)
        try:
            birth, death = parse_number(tokens[0]), parse_number(tokens[1])
        except ValueError as exc:
            raise ParseError(str(exc), source, number) from None
        if birth == math.inf or birth < 0 or death < birth:
            raise ParseError(f"invalid bar ({tokens[0]}, {tokens[1]})", source, number)
        points.append((birth, death))
    if header is None:
        raise ParseError("missing '# dim=<p> field=<rat|Fq>' header", source)
    return PersistenceDiagram(header["degree"], tuple(points)), header["field"]


def read_dgm(path):
    path = Path(path)
    return parse_dgm(read_source(path), str(path))
