"""
Persistence diagram plots.

Finite bars are drawn at (birth, death), infinite bars on a rail above
the largest finite value, and repeated points carry a ×k label.
"""

from collections import Counter
from pathlib import Path

import pandas as pd
import plotly.express as px
import plotly.graph_objects as go

from main.formats.numbers import format_number
from main.topology.persistence import INF, PersistenceDiagram

DIV_ID = "persistence-diagram"


def diagram_frame(diagram: PersistenceDiagram) -> pd.DataFrame:
    """
    One row per distinct point.

    Returns:
        pd.DataFrame: Birth, Death (float, inf allowed), Multiplicity, Label
    """
    counts = Counter(diagram.points)
    rows = []
    for (birth, death), k in sorted(counts.items()):
        rows.append({
            "Birth": float(birth),
            "Death": float(death),
            "Multiplicity": k,
            "Label": f"({format_number(birth)}, {format_number(death)})",
        })
    return pd.DataFrame(rows, columns=["Birth", "Death", "Multiplicity", "Label"])


def diagram_figure(diagram: PersistenceDiagram, title: str | None = None) -> go.Figure:
    """Build the scatter plot with the diagonal and the ∞ rail."""
    df = diagram_frame(diagram)
    finite = df[df["Death"] != INF]
    values = list(finite["Birth"]) + list(finite["Death"]) + list(df["Birth"])
    top = max(values, default=0.0)
    top = top * 1.1 if top > 0 else 1.0
    rail = top * 1.05

    plotted = df.assign(Y=df["Death"].where(df["Death"] != INF, rail))
    fig = px.scatter(
        plotted,
        x="Birth",
        y="Y",
        hover_name="Label",
        title=title or f"H_{diagram.degree} persistence diagram",
        color_discrete_sequence=px.colors.qualitative.Pastel,
    )
    fig.add_trace(go.Scatter(x=[0, rail], y=[0, rail], mode="lines", name="diagonal",
                             line=dict(color="gray", dash="dash")))
    fig.add_trace(go.Scatter(x=[0, rail], y=[rail, rail], mode="lines", name="∞",
                             line=dict(color="lightgray")))

    for _, row in plotted[plotted["Multiplicity"] > 1].iterrows():
        fig.add_annotation(x=row["Birth"], y=row["Y"], text=f"×{row['Multiplicity']}",
                           showarrow=False, yshift=12)

    fig.update_layout(
        xaxis_title="Birth",
        yaxis_title="Death",
        xaxis=dict(range=[0, rail * 1.02]),
        yaxis=dict(range=[0, rail * 1.08]),
        autosize=True,
        margin=dict(l=20, r=20, t=40, b=20),
    )
    return fig


def save_figure(fig: go.Figure, path) -> Path:
    """``.html`` is written self-contained; any other suffix goes through the static image export."""
    path = Path(path)
    if path.suffix.lower() == ".html":
        fig.write_html(path, include_plotlyjs=True, full_html=True, div_id=DIV_ID)
    else:
        fig.write_image(path)
    return path
