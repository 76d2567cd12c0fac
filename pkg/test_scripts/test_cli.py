import pandas as pd
import pytest

from main.app import main

SQUARE = "e 0 1 1\ne 0 2 1\ne 1 3 1\ne 2 3 1\n"
CYCLE = "e a b 1\ne b c 1\ne c a 1\n"
IDENTITY = "0 0\n1 1\n2 2\n3 3\n"


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    """Run every command inside an empty directory with no PPH_* overrides."""
    for name in ("PPH_FIELD", "PPH_SEED", "PPH_TRIALS", "PPH_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path.name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_diagram_of_the_directed_cycle(workspace, capsys):
    write(workspace / "c.wdg", CYCLE)
    code, out, _ = run(capsys, "diagram", "c.wdg", "--filtration", "edge", "--dim", "1")
    assert code == 0
    assert out.splitlines() == ["# dim=1 field=rat", "1 inf"]


def test_diagram_to_a_file(workspace, capsys):
    write(workspace / "c.wdg", CYCLE)
    code, out, _ = run(capsys, "diagram", "c.wdg", "--out", "c.dgm")
    assert code == 0
    assert out == "wrote c.dgm"
    assert (workspace / "c.dgm").read_text(encoding="utf-8") == "# dim=0 field=rat\n0 1\n0 1\n0 inf\n"


def test_filtration_must_match_the_input(workspace, capsys):
    write(workspace / "c.wdg", CYCLE)
    code, _, err = run(capsys, "diagram", "c.wdg", "--filtration", "path")
    assert code == 2
    assert err.startswith("error[usage]:")


def test_bottleneck(workspace, capsys):
    write(workspace / "a.dgm", "# dim=0 field=rat\n0 1\n0 inf\n")
    write(workspace / "b.dgm", "# dim=0 field=rat\n0 2\n0 inf\n")
    code, out, _ = run(capsys, "bottleneck", "a.dgm", "b.dgm")
    assert (code, out) == (0, "1")
    code, out, _ = run(capsys, "bottleneck", "a.dgm", "b.dgm", "--witness")
    lines = out.splitlines()
    assert lines[0] == "1"
    assert "pair (0, inf) -> (0, inf) cost 0" in lines


def test_bottleneck_degree_mismatch(workspace, capsys):
    write(workspace / "a.dgm", "# dim=0 field=rat\n0 1\n")
    write(workspace / "b.dgm", "# dim=1 field=rat\n0 1\n")
    code, _, err = run(capsys, "bottleneck", "a.dgm", "b.dgm")
    assert code == 1
    assert err.startswith("error[degree]:")


def test_bound_for_perturbed_weights(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    write(workspace / "h.wdg", SQUARE.replace("e 0 1 1", "e 0 1 1.5"))
    code, out, _ = run(capsys, "bound", "g.wdg", "h.wdg", "--check")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "bound 0.5"
    assert "bottleneck 0" in lines
    assert lines[-1] == "d_B <= bound: yes"


def test_bound_reports_a_broken_chain(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    write(workspace / "id.vmap", IDENTITY)
    write(workspace / "drop.vmap", "0 3\n1 3\n2 3\n3 3\n")
    code, _, err = run(capsys, "bound", "g.wdg", "g.wdg", "--fchain", "id.vmap", "drop.vmap", "id.vmap")
    assert code == 1
    assert err.startswith("error[homotopy]: link 1")


def test_bound_with_a_valid_chain(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    write(workspace / "id.vmap", IDENTITY)
    write(workspace / "push.vmap", "0 1\n1 1\n2 3\n3 3\n")
    code, out, _ = run(capsys, "bound", "g.wdg", "g.wdg", "--fchain", "id.vmap", "push.vmap", "id.vmap")
    assert code == 0
    assert out.splitlines()[0] == "bound 0.5"


def test_complete_bound_searches_maps(workspace, capsys):
    write(workspace / "g.wdg", "e a b 1\ne b a 1\n")
    write(workspace / "h.wdg", "v x\n")
    code, out, _ = run(capsys, "bound", "g.wdg", "h.wdg", "--complete", "--check")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "bound 0.5"
    assert "phi a->x b->x" in lines
    assert "bottleneck 0.5" in lines


def test_bound_needs_maps_between_different_vertex_sets(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    write(workspace / "c.wdg", CYCLE)
    code, _, err = run(capsys, "bound", "g.wdg", "c.wdg")
    assert code == 2
    assert err.startswith("error[usage]:")


def test_perturb(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    code, out, _ = run(
        capsys, "perturb", "g.wdg", "--eps", "0.5", "--trials", "5", "--seed", "3", "--quiet", "--out", "r.csv"
    )
    lines = out.splitlines()
    assert code == 0
    assert lines[:2] == ["trials 5", "violations 0"]
    assert lines[-1] == "wrote r.csv"
    report = pd.read_csv(workspace / "r.csv")
    assert list(report.columns) == ["trial", "bound", "distance", "ratio", "violation"]
    assert len(report) == 5
    assert not report["violation"].any()


def test_plot_writes_html(workspace, capsys):
    write(workspace / "d.dgm", "# dim=1 field=rat\n0 2\n0 2\n1 inf\n")
    code, out, _ = run(capsys, "plot", "d.dgm", "--out", "d.html")
    assert (code, out) == (0, "wrote d.html")
    assert "persistence-diagram" in (workspace / "d.html").read_text(encoding="utf-8")


def test_homology(workspace, capsys):
    write(workspace / "g.wdg", SQUARE)
    write(workspace / "c.wdg", CYCLE)
    assert run(capsys, "homology", "g.wdg", "--dim", "1")[:2] == (0, "H_0 1\nH_1 0")
    assert run(capsys, "homology", "g.wdg", "--dim", "1", "--delta", "0")[:2] == (0, "H_0 4\nH_1 0")
    assert run(capsys, "homology", "c.wdg", "--dim", "1")[:2] == (0, "H_0 1\nH_1 1")


def test_homology_of_a_path_complex(workspace, capsys):
    write(workspace / "p.wpc", "closure auto\np a b c\nw a b 1\nw b c 1\n")
    code, out, _ = run(capsys, "homology", "p.wpc", "--dim", "1", "--field", "F2")
    assert (code, out) == (0, "H_0 1\nH_1 0")


@pytest.mark.parametrize(
    "argv",
    [
        ["diagram", "c.wdg", "--field", "F4"],
        ["perturb", "c.wdg", "--eps=-1"],
        ["homology", "c.wdg", "--delta=-1"],
        ["diagram", "c.txt"],
    ],
)
def test_usage_errors(workspace, capsys, argv):
    write(workspace / "c.wdg", CYCLE)
    write(workspace / "c.txt", CYCLE)
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error[usage]:")


def test_missing_file(workspace, capsys):
    code, _, err = run(capsys, "diagram", "missing.wdg")
    assert code == 1
    assert err.startswith("error[io]:")


def test_parse_errors_name_the_line(workspace, capsys):
    write(workspace / "bad.wdg", "e a b 1\ne a a 1\n")
    code, _, err = run(capsys, "diagram", "bad.wdg")
    assert code == 1
    assert err.startswith("error[parse]: bad.wdg:2:")


def test_argparse_errors_exit_with_usage(capsys):
    with pytest.raises(SystemExit) as caught:
        main(["diagram"])
    assert caught.value.code == 2
    assert capsys.readouterr().err.startswith("error[usage]:")


def test_edgeless_input_gives_one_infinite_bar_per_vertex(workspace, capsys):
    write(workspace / "e.wdg", "v a\nv b\nv c\n")
    code, out, _ = run(capsys, "diagram", "e.wdg")
    assert code == 0
    assert out.splitlines()[1:] == ["0 inf", "0 inf", "0 inf"]


def test_identical_diagrams_are_at_distance_zero(workspace, capsys):
    write(workspace / "a.dgm", "# dim=1 field=rat\n1/3 2\n1 inf\n")
    assert run(capsys, "bottleneck", "a.dgm", "a.dgm")[:2] == (0, "0")


def test_diagram_output_is_repeatable(workspace, capsys):
    write(workspace / "g.wdg", SQUARE.replace("e 0 2 1", "e 0 2 1/3"))
    first = run(capsys, "diagram", "g.wdg", "--field", "F5")
    assert run(capsys, "diagram", "g.wdg", "--field", "F5") == first
    assert first[1].splitlines()[0] == "# dim=0 field=F5"


def test_non_utf8_input_is_a_parse_error(workspace, capsys):
    (workspace / "bad.wdg").write_bytes(b"e \xff\xfe c 2\n")
    code, _, err = run(capsys, "diagram", "bad.wdg")
    assert code == 1
    assert err.startswith("error[parse]: bad.wdg:")


def test_plot_rejects_unknown_suffixes(workspace, capsys):
    write(workspace / "d.dgm", "# dim=0 field=rat\n0 inf\n")
    code, _, err = run(capsys, "plot", "d.dgm", "--out", "d.txt")
    assert code == 2
    assert err.startswith("error[usage]:")
    assert not (workspace / "d.txt").exists()


def test_bottleneck_field_mismatch(workspace, capsys):
    write(workspace / "a.dgm", "# dim=0 field=rat\n0 1\n")
    write(workspace / "b.dgm", "# dim=0 field=F2\n0 1\n")
    code, _, err = run(capsys, "bottleneck", "a.dgm", "b.dgm")
    assert code == 1
    assert err.startswith("error[mode-mismatch]:")


def test_bound_collapsing_a_cone(workspace, capsys):
    write(workspace / "g.wdg", SQUARE + "e top 0 1\ne top 1 2\ne top 2 1\ne top 3 1/2\n")
    write(workspace / "h.wdg", "v top\n")
    write(workspace / "phi.vmap", "0 top\n1 top\n2 top\n3 top\ntop top\n")
    write(workspace / "psi.vmap", "top top\n")
    code, out, _ = run(capsys, "bound", "g.wdg", "h.wdg", "--phi", "phi.vmap", "--psi", "psi.vmap", "--check")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "bound 1"
    assert "bottleneck 0.5" in lines
    assert lines[-1] == "d_B <= bound: yes"


def test_bound_for_a_reweighted_path_complex(workspace, capsys):
    write(workspace / "p.wpc", "closure auto\np a b c\nw a b 1\nw b c 2\n")
    write(workspace / "q.wpc", "closure auto\np a b c\nw a b 1\nw b c 3\n")
    code, out, _ = run(capsys, "bound", "p.wpc", "q.wpc", "--dim", "0", "--check")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "bound 1"
    assert "bottleneck 1" in lines
    assert lines[-1] == "d_B <= bound: yes"
