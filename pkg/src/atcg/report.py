"""Report rendering: delimited reachability/scenario output plus net and
reachability-graph figures written as PNG files."""

from __future__ import annotations

import csv
import os
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .petri import (Bounds, PrTNet, ReachGraph, format_binding,
                    format_marking, reach_graph, test_tree)
from .testgen import format_model_tests, scenarios


def write_reach_csv(graph: ReachGraph, path: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["from", "transition", "binding", "to"])
        for si, tid, binding, ti in graph.edges:
            writer.writerow(["m%d" % si, tid, format_binding(binding),
                             "m%d" % ti])


def draw_net(net: PrTNet, path: str):
    """Draw places as circles (with initial token counts), transitions as
    rectangles (silent ones dimmed), and arcs as arrows, at the net's stored
    coordinates."""
    fig, ax = plt.subplots(figsize=(max(6, len(net.places) * 1.6), 4))
    pos = {}
    init_counts: Dict[str, int] = {}
    for pid, _ in net.init_decl:
        init_counts[pid] = init_counts.get(pid, 0) + 1
    for p in net.places:
        pos[p.id] = p.position
        ax.add_patch(plt.Circle(p.position, 28, fill=False, color="tab:blue"))
        ax.annotate(p.name, p.position, ha="center", va="center", fontsize=8)
        if init_counts.get(p.id):
            ax.annotate(str(init_counts[p.id]),
                        (p.position[0] + 22, p.position[1] - 22),
                        color="tab:red", fontsize=8)
    for t in net.transitions:
        pos[t.id] = t.position
        color = "lightgray" if t.silent else "tab:green"
        ax.add_patch(plt.Rectangle((t.position[0] - 30, t.position[1] - 15),
                                   60, 30, fill=True, alpha=0.3, color=color))
        ax.annotate(t.name, t.position, ha="center", va="center", fontsize=8)
    for a in net.arcs:
        if a.source in pos and a.target in pos:
            x0, y0 = pos[a.source]
            x1, y1 = pos[a.target]
            ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                        arrowprops=dict(arrowstyle="->", color="gray",
                                        alpha=0.6))
    ax.autoscale_view()
    ax.relim()
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def draw_reach(graph: ReachGraph, path: str):
    """Layered drawing of the reachability graph: breadth-first depth on the
    x axis, edge labels on the arrows."""
    depth = {0: 0}
    order: List[int] = [0]
    adj: Dict[int, List[int]] = {}
    for si, _, _, ti in graph.edges:
        adj.setdefault(si, []).append(ti)
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for t in adj.get(s, []):
                if t not in depth:
                    depth[t] = depth[s] + 1
                    order.append(t)
                    nxt.append(t)
        frontier = nxt
    lanes: Dict[int, int] = {}
    per_depth: Dict[int, int] = {}
    for s in order:
        d = depth[s]
        lanes[s] = per_depth.get(d, 0)
        per_depth[d] = lanes[s] + 1
    pos = {s: (depth.get(s, 0) * 2.0, lanes.get(s, 0) * 1.5)
           for s in range(len(graph.states))}

    fig, ax = plt.subplots(figsize=(max(6, (max(depth.values()) + 1) * 1.8),
                                    max(4, (max(per_depth.values())) * 1.2)))
    for s, (x, y) in pos.items():
        ax.add_patch(plt.Circle((x, y), 0.25, fill=True, alpha=0.2,
                                color="tab:blue"))
        ax.annotate("m%d" % s, (x, y), ha="center", va="center", fontsize=9)
    for si, tid, binding, ti in graph.edges:
        x0, y0 = pos[si]
        x1, y1 = pos[ti]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color="gray", alpha=0.7,
                                    shrinkA=14, shrinkB=14))
        ax.annotate(tid, ((x0 + x1) / 2, (y0 + y1) / 2 + 0.1),
                    fontsize=7, color="tab:red", ha="center")
    ax.autoscale_view()
    ax.relim()
    ax.axis("off")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def write_report(net: PrTNet, out_dir: str, bounds: Bounds = None) -> List[str]:
    """Write reach.csv, scenarios.txt, states.txt, net.png, and reach.png
    into out_dir; returns the written paths."""
    bounds = bounds or Bounds()
    os.makedirs(out_dir, exist_ok=True)
    graph = reach_graph(net, bounds)
    tree = test_tree(net, bounds)
    suite = scenarios(tree)

    paths = []

    p = os.path.join(out_dir, "reach.csv")
    write_reach_csv(graph, p)
    paths.append(p)

    p = os.path.join(out_dir, "states.txt")
    with open(p, "w") as fh:
        for i, m in enumerate(graph.states):
            fh.write("m%d: %s\n" % (i, format_marking(m)))
    paths.append(p)

    p = os.path.join(out_dir, "scenarios.txt")
    with open(p, "w") as fh:
        fh.write(format_model_tests(suite, maximal_only=False))
    paths.append(p)

    p = os.path.join(out_dir, "net.png")
    draw_net(net, p)
    paths.append(p)

    p = os.path.join(out_dir, "reach.png")
    draw_reach(graph, p)
    paths.append(p)

    return paths
