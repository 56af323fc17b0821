"""Report rendering: JSON and CSV outputs plus matplotlib figures.

Both report paths write three files into the output directory: the machine
summary (JSON), a delimited table (CSV), and a PNG figure. The Likert chart
is a diverging bar per question centered between scores below 4 and 4-or-
above; the theme chart is a force-laid-out co-occurrence network.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .analytics import QUESTION_IDS, SCORE_RANGE, LikertSummary, ThemeGraph

# Score colors, low-to-high: reds below 4, grey at 4, greens above.
_SCORE_COLORS = {
    1: "#a50026",
    2: "#d73027",
    3: "#f46d43",
    4: "#bdbdbd",
    5: "#a6d96a",
    6: "#66bd63",
    7: "#1a9850",
}


def write_likert_json(summary: LikertSummary, path: Path) -> None:
    path.write_text(json.dumps(summary.to_json_dict(), indent=2), encoding="utf-8")


def write_likert_csv(summary: LikertSummary, path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["question", "mean"]
            + [f"count_{s}" for s in SCORE_RANGE]
            + [f"pct_{s}" for s in SCORE_RANGE]
            + ["pct_below_4", "pct_at_4", "pct_above_4"]
        )
        for qid in QUESTION_IDS:
            q = summary.questions[qid]
            writer.writerow(
                [qid, q.mean]
                + [q.counts[s] for s in SCORE_RANGE]
                + [q.percentages[s] for s in SCORE_RANGE]
                + [q.pct_below_4, q.pct_at_4, q.pct_above_4]
            )


def render_likert_figure(summary: LikertSummary, path: Path) -> None:
    """Diverging stacked bars: below-4 shares leftward, 4-and-up rightward."""
    fig, ax = plt.subplots(figsize=(9, 5))
    ypos = range(len(QUESTION_IDS), 0, -1)
    for y, qid in zip(ypos, QUESTION_IDS):
        q = summary.questions[qid]
        left = 0.0
        for score in (3, 2, 1):
            share = q.percentages[score]
            left -= share
            ax.barh(y, share, left=left, color=_SCORE_COLORS[score], height=0.7)
        right = 0.0
        for score in (4, 5, 6, 7):
            share = q.percentages[score]
            ax.barh(y, share, left=right, color=_SCORE_COLORS[score], height=0.7)
            right += share
        ax.text(-q.pct_below_4 - 2, y, f"{q.pct_below_4:.1f}%", va="center", ha="right", fontsize=8)
        ax.text(right + 2, y, f"{100 - q.pct_below_4:.1f}%", va="center", ha="left", fontsize=8)
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_yticks(list(ypos), [q.upper() for q in QUESTION_IDS])
    ax.set_xlim(-115, 115)
    ax.set_xlabel("share of responses (%), centered between below-4 and 4-or-above")
    ax.set_title(f"Score distribution per question (n={summary.n})")
    handles = [plt.Rectangle((0, 0), 1, 1, color=_SCORE_COLORS[s]) for s in SCORE_RANGE]
    ax.legend(handles, [str(s) for s in SCORE_RANGE], title="score", loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def likert_table_text(summary: LikertSummary) -> str:
    lines = [
        f"{'question':<10}{'mean':>6}{'below 4 %':>11}{'at 4 %':>8}{'above 4 %':>11}",
        "-" * 46,
    ]
    for qid in QUESTION_IDS:
        q = summary.questions[qid]
        lines.append(
            f"{qid:<10}{q.mean:>6.2f}{q.pct_below_4:>11.1f}{q.pct_at_4:>8.1f}{q.pct_above_4:>11.1f}"
        )
    lines.append("-" * 46)
    lines.append(
        f"overall   below 4: {summary.overall_pct_below_4:.1f}%   "
        f"at or above 4: {summary.overall_pct_at_or_above_4:.1f}%   (n={summary.n})"
    )
    return "\n".join(lines)


def write_likert_report(summary: LikertSummary, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out / "likert_summary.json",
        "csv": out / "likert_summary.csv",
        "png": out / "likert_distribution.png",
    }
    write_likert_json(summary, paths["json"])
    write_likert_csv(summary, paths["csv"])
    render_likert_figure(summary, paths["png"])
    return paths


def write_theme_json(graph: ThemeGraph, path: Path) -> None:
    path.write_text(json.dumps(graph.to_node_link(), indent=2), encoding="utf-8")


def write_theme_csv(graph: ThemeGraph, nodes_path: Path, edges_path: Path) -> None:
    with nodes_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "weight"])
        for node in graph.nodes:
            writer.writerow([node.label, node.weight])
    with edges_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", "weight"])
        for edge in graph.edges:
            writer.writerow([edge.a, edge.b, edge.weight])


def render_theme_figure(graph: ThemeGraph, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(9, 7))
    if not graph.nodes:
        ax.text(0.5, 0.5, "no themes", ha="center", va="center")
        ax.axis("off")
    else:
        g = nx.Graph()
        for node in graph.nodes:
            g.add_node(node.label, weight=node.weight)
        for edge in graph.edges:
            g.add_edge(edge.a, edge.b, weight=edge.weight)
        pos = nx.spring_layout(g, seed=42, k=1.2)
        sizes = [300 + 260 * g.nodes[n]["weight"] for n in g.nodes]
        widths = [0.6 + 0.9 * g.edges[e]["weight"] for e in g.edges]
        nx.draw_networkx_edges(g, pos, ax=ax, width=widths, edge_color="#9ecae1")
        nx.draw_networkx_nodes(g, pos, ax=ax, node_size=sizes, node_color="#3182bd", alpha=0.85)
        nx.draw_networkx_labels(g, pos, ax=ax, font_size=8)
        ax.axis("off")
        ax.set_title("Feedback themes: mentions and co-mentions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def theme_table_text(graph: ThemeGraph) -> str:
    lines = [f"{'theme':<42}{'mentions':>9}", "-" * 51]
    for node in graph.nodes:
        lines.append(f"{node.label:<42}{node.weight:>9}")
    lines.append("")
    lines.append(f"{'co-mention pair':<60}{'weight':>7}")
    lines.append("-" * 67)
    for edge in graph.edges:
        lines.append(f"{edge.a + ' -- ' + edge.b:<60}{edge.weight:>7}")
    return "\n".join(lines)


def write_theme_report(graph: ThemeGraph, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out / "theme_graph.json",
        "nodes_csv": out / "theme_nodes.csv",
        "edges_csv": out / "theme_edges.csv",
        "png": out / "theme_network.png",
    }
    write_theme_json(graph, paths["json"])
    write_theme_csv(graph, paths["nodes_csv"], paths["edges_csv"])
    render_theme_figure(graph, paths["png"])
    return paths
