import math
from fractions import Fraction

import pytest

from main.errors import ParseError
from main.formats.diagram_files import parse_dgm, read_dgm, render_dgm, write_dgm
from main.formats.graph_files import (
    parse_vmap,
    parse_wdg,
    parse_wpc,
    read_wdg,
    read_wpc,
    render_vmap,
    render_wdg,
    write_wdg,
    write_wpc,
)
from main.formats.numbers import format_number, parse_number
from main.topology.persistence import INF, PersistenceDiagram


@pytest.mark.parametrize(
    "value, text",
    [
        (Fraction(1, 4), "0.25"),
        (Fraction(1, 3), "1/3"),
        (3, "3"),
        (math.inf, "inf"),
        (Fraction(-5, 2), "-2.5"),
        (Fraction(1, 20), "0.05"),
    ],
)
def test_format_number(value, text):
    assert format_number(value) == text


def test_parse_number():
    assert parse_number("0.25") == Fraction(1, 4)
    assert parse_number(" 1/3 ") == Fraction(1, 3)
    assert parse_number("inf") == math.inf
    with pytest.raises(ValueError):
        parse_number("1/0")
    with pytest.raises(ValueError):
        parse_number("three")


def test_parse_wdg():
    g = parse_wdg("# a line\nv a\nv lonely\ne a b 0.5  # half\ne b a 1/3\n")
    assert g.vertices == frozenset({"a", "b", "lonely"})
    assert g.weight("a", "b") == Fraction(1, 2)
    assert g.weight("b", "a") == Fraction(1, 3)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("v a\ne a a 1\n", "<wdg>:2: self-loop"),
        ("e a b -1\n", "<wdg>:1: weight -1 must be positive"),
        ("e a b 1\ne a b 2\n", "<wdg>:2: duplicate edge"),
        ("e a b one\n", "<wdg>:1:"),
        ("x a b\n", "<wdg>:1: cannot read"),
    ],
)
def test_parse_wdg_errors(text, fragment):
    with pytest.raises(ParseError) as caught:
        parse_wdg(text)
    assert fragment in str(caught.value)


def test_wdg_file_round_trip(tmp_path, square):
    path = write_wdg(square.with_weights({**square.weights, ("0", "1"): Fraction(1, 3)}), tmp_path / "sq.wdg")
    again = read_wdg(path)
    assert again.weight("0", "1") == Fraction(1, 3)
    assert render_wdg(again) == path.read_text(encoding="utf-8")


def test_parse_wpc_strict_rejects_open_path_sets():
    with pytest.raises(ParseError) as caught:
        parse_wpc("p a b c\nw a b 1\nw b c 1\n")
    assert "not truncation-closed" in str(caught.value)


def test_parse_wpc_auto_closes():
    p = parse_wpc("closure auto\np a b c\nw a b 1\nw b c 2\n")
    assert "a b c" in p.complex
    assert "b c" in p.complex
    assert p.weights[("b", "c")] == 2


@pytest.mark.parametrize(
    "text",
    [
        "closure auto\np a b c\nw a b 1\n",
        "closure auto\np a b\nw a b 1\nw b a 1\n",
        "closure sometimes\np a\n",
        "closure auto\np a b\nw a b 1\nw a b 2\n",
    ],
)
def test_parse_wpc_errors(text):
    with pytest.raises(ParseError):
        parse_wpc(text)


def test_parse_vmap():
    f = parse_vmap("a x\nb x  # both to x\n", domain=["a", "b"], codomain=["x", "y"])
    assert dict(f) == {"a": "x", "b": "x"}
    assert render_vmap(f) == "a x\nb x\n"


@pytest.mark.parametrize(
    "text, kwargs",
    [
        ("a x\na y\n", {}),
        ("a z\n", {"codomain": ["x"]}),
        ("a x\n", {"domain": ["a", "b"]}),
        ("a x y\n", {}),
    ],
)
def test_parse_vmap_errors(text, kwargs):
    with pytest.raises(ParseError):
        parse_vmap(text, **kwargs)


def test_dgm_text():
    diagram, field = parse_dgm("# dim=1 field=F3\n1/3 2.5\n\n0 inf\n")
    assert diagram.degree == 1
    assert field.label == "F3"
    assert diagram.points == ((0, INF), (Fraction(1, 3), Fraction(5, 2)))
    assert render_dgm(diagram, field) == "# dim=1 field=F3\n0 inf\n1/3 2.5\n"


def test_dgm_file_round_trip(tmp_path):
    diagram = PersistenceDiagram(0, ((0, 1), (0, 1), (0, INF)))
    path = write_dgm(diagram, tmp_path / "d.dgm")
    again, field = read_dgm(path)
    assert again == diagram
    assert field.label == "rat"


@pytest.mark.parametrize(
    "text",
    [
        "0 1\n",
        "# dim=0 field=F4\n0 1\n",
        "# dim=-1 field=rat\n",
        "# dim=0 field=rat\n2 1\n",
        "# dim=0 field=rat\ninf inf\n",
        "# dim=0 field=rat\n0 1 2\n",
        "",
    ],
)
def test_dgm_errors(text):
    with pytest.raises(ParseError):
        parse_dgm(text)


def test_wpc_file_round_trip(tmp_path):
    p = parse_wpc("closure auto\np a b c\nw a b 1/3\nw b c 2\n")
    again = read_wpc(write_wpc(p, tmp_path / "p.wpc"))
    assert again.complex == p.complex
    assert again.weights == p.weights


def test_readers_reject_non_utf8_bytes(tmp_path):
    for name in ("g.wdg", "p.wpc", "d.dgm"):
        (tmp_path / name).write_bytes(b"e \xff\xfe c 2\n")
    for reader, name in ((read_wdg, "g.wdg"), (read_wpc, "p.wpc"), (read_dgm, "d.dgm")):
        with pytest.raises(ParseError) as caught:
            reader(tmp_path / name)
        assert str(caught.value).startswith(str(tmp_path / name))
        assert "not UTF-8" in str(caught.value)
