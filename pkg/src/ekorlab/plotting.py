"""Hasse diagram figures for the EKOR poset."""

from __future__ import annotations

from collections import defaultdict

import networkx as nx


def hasse_layout(graph: nx.DiGraph) -> dict:
    """Place nodes in rows by length, spread evenly within a row."""
    rows = defaultdict(list)
    for n, data in graph.nodes(data=True):
        rows[data["length"]].append(n)
    pos = {}
    for length, nodes in rows.items():
        nodes.sort()
        k = len(nodes)
        for i, n in enumerate(nodes):
            pos[n] = ((i + 1) / (k + 1), length)
    return pos


def draw_hasse(graph: nx.DiGraph, path: str, title: str = "", labels: bool | None = None) -> None:
    """Render the poset to an image file; straight elements are drawn with a double ring."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pos = hasse_layout(graph)
    n = graph.number_of_nodes()
    if labels is None:
        labels = n <= 40
    height = max((d["length"] for _, d in graph.nodes(data=True)), default=0)
    fig, ax = plt.subplots(figsize=(max(6.0, min(24.0, n * 0.5)), max(4.0, 1.2 * (height + 1))))
    for a, b in graph.edges():
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=0.8, zorder=1)
    for node, data in graph.nodes(data=True):
        x, y = pos[node]
        face = "tab:orange" if data.get("in_bmax") else "white"
        ax.scatter([x], [y], s=120, facecolor=face, edgecolor="black", zorder=2)
        if data.get("straight"):
            ax.scatter([x], [y], s=260, facecolor="none", edgecolor="black", zorder=2)
        if labels:
            ax.annotate(repr(data["element"]), (x, y), xytext=(0, 9), textcoords="offset points",
                        ha="center", fontsize=6)
    ax.set_ylabel("length")
    ax.set_xticks([])
    ax.set_yticks(range(height + 1))
    ax.set_ylim(-0.7, height + 0.7)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
