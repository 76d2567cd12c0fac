from main.cli.visualization import DIV_ID, diagram_figure, diagram_frame, save_figure
from main.topology.persistence import INF, PersistenceDiagram


def test_frame_counts_repeated_points():
    df = diagram_frame(PersistenceDiagram(0, ((0, 1), (0, 1), (0, INF))))
    assert list(df["Multiplicity"]) == [2, 1]
    assert list(df["Label"]) == ["(0, 1)", "(0, inf)"]


def test_infinite_bars_sit_on_the_rail():
    fig = diagram_figure(PersistenceDiagram(1, ((1, 3), (2, INF))))
    names = [trace.name for trace in fig.data]
    assert "diagonal" in names and "∞" in names
    rail = next(trace for trace in fig.data if trace.name == "∞").y[0]
    assert max(fig.data[0].y) == rail
    assert fig.layout.title.text == "H_1 persistence diagram"


def test_empty_diagram_still_draws_the_diagonal():
    fig = diagram_figure(PersistenceDiagram(0, ()))
    assert "diagonal" in [trace.name for trace in fig.data]


def test_html_export(tmp_path):
    path = save_figure(diagram_figure(PersistenceDiagram(0, ((0, 1),))), tmp_path / "d.html")
    assert DIV_ID in path.read_text(encoding="utf-8")
