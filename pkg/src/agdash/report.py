"""Static report rendering: figures plus delimited tables.

The dashboard UI is the interactive surface; this module renders the same
three views to files for hand-offs and archiving. Each report directory
gets matrix.png / timeline.png / graph.png next to matrix.tsv, nodes.tsv,
edges.tsv, and timeline.tsv.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .graph import FilterSpec, GlobalAttackGraph, LayoutMethod, assign_layout_levels, filter_graph, key_str
from .store import Store
from .timeline import Perspective, TimelineSegment, build_timeline
from .urgency import RecommenderMatrix, UrgencyClass, build_matrix, ranked_cells, zero_matrix
from .errors import EmptyNodeSetError

MACRO_COLORS = {
    "Reconnaissance": "#8dd3c7",
    "Discovery": "#80b1d3",
    "Credential Access": "#fdb462",
    "Privilege Escalation": "#fb8072",
    "Execution": "#bc80bd",
    "Disruption": "#d9d9d9",
    "Distortion": "#ffed6f",
    "Exfiltration": "#b3de69",
    "Delivery": "#fccde5",
    "Unknown": "#cccccc",
    "root": "#ffffff",
}

CLASS_GRAYS = {
    UrgencyClass.ZERO: "#ffffff",
    UrgencyClass.MINOR: "#e0e0e0",
    UrgencyClass.MAJOR: "#9e9e9e",
    UrgencyClass.CRITICAL: "#515151",
}

NODE_MARKERS = {"ellipse": "o", "box": "s", "hexagon": "h"}


def render_matrix_figure(matrix: RecommenderMatrix, path: Path) -> None:
    """Tactic columns with technique cells shaded by urgency class."""
    columns = matrix.columns
    depth = max(len(c.cells) for c in columns)
    fig, ax = plt.subplots(
        figsize=(1.9 * len(columns), 0.62 * (depth + 2)), layout="constrained"
    )
    ax.set_xlim(0, len(columns))
    ax.set_ylim(0, depth + 1)
    ax.invert_yaxis()
    ax.axis("off")
    for x, column in enumerate(columns):
        ax.add_patch(plt.Rectangle((x, 0), 1, 1, facecolor="#37474f", edgecolor="white"))
        ax.text(x + 0.5, 0.5, column.macro.value, color="white", ha="center",
                va="center", fontsize=8, wrap=True)
        for y, cell in enumerate(column.cells, start=1):
            shade = CLASS_GRAYS[cell.urgency_class]
            ax.add_patch(plt.Rectangle((x, y), 1, 1, facecolor=shade, edgecolor="white"))
            dark = cell.urgency_class is UrgencyClass.CRITICAL
            ax.text(
                x + 0.5, y + 0.5,
                f"{cell.micro.value}\n{cell.urgency_score:.3f}",
                ha="center", va="center", fontsize=6.5,
                color="white" if dark else "black",
            )
    ax.set_title(f"Urgency matrix ({matrix.total_nodes} nodes, {matrix.total_alerts} alerts)")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_timeline_figure(
    lanes: list[str], segments: list[TimelineSegment], path: Path, perspective: Perspective
) -> None:
    """Swimlanes per host; one row per micro|service label inside a lane."""
    rows = []
    for lane in lanes:
        labels = sorted({s.row_label for s in segments if s.lane == lane})
        for label in labels:
            rows.append((lane, label))
    fig, ax = plt.subplots(
        figsize=(11, max(3.2, 0.38 * len(rows) + 1.2)), layout="constrained"
    )
    index = {row: i for i, row in enumerate(rows)}
    for segment in segments:
        y = index[(segment.lane, segment.row_label)]
        width = max((segment.end_ts - segment.start_ts).total_seconds() / 86400.0, 30 / 86400.0)
        ax.broken_barh(
            [(matplotlib.dates.date2num(segment.start_ts), width)],
            (y - 0.35, 0.7),
            facecolors=MACRO_COLORS.get(segment.macro, "#999999"),
            edgecolors="#444444",
            linewidth=0.4,
        )
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([f"{lane}  {label}" for lane, label in rows], fontsize=6.5)
    ax.xaxis_date()
    fig.autofmt_xdate()
    ax.set_title(f"Episode timeline ({perspective.value} perspective)")
    ax.grid(axis="x", alpha=0.3)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_graph_figure(graph: GlobalAttackGraph, path: Path) -> None:
    """Layered node-link drawing of the global graph."""
    levels = assign_layout_levels(graph, LayoutMethod.DIRECTED)
    by_level: dict[int, list] = {}
    for key in sorted(graph.nodes):
        by_level.setdefault(levels[key], []).append(key)
    positions = {}
    for level, keys in by_level.items():
        for slot, key in enumerate(keys):
            positions[key] = (level * 3.0, slot * 1.6 - 0.8 * (len(keys) - 1))

    width = 3.0 * (max(by_level) + 1 if by_level else 1)
    height = 1.6 * max((len(v) for v in by_level.values()), default=1)
    fig, ax = plt.subplots(figsize=(max(6, width * 0.9), max(4, height * 0.75)))
    for edge in graph.edges:
        src, dst = positions[edge.from_key], positions[edge.to_key]
        arrow = FancyArrowPatch(
            src, dst, arrowstyle="-|>", mutation_scale=9,
            color="#666666", linewidth=0.7, alpha=0.75,
            connectionstyle="arc3,rad=0.08", shrinkA=12, shrinkB=12,
        )
        ax.add_patch(arrow)
        if edge.to_key != graph.root.key:
            mid = ((src[0] + dst[0]) / 2, (src[1] + dst[1]) / 2 + 0.12)
            ax.text(*mid, edge.label, fontsize=5, color="#333333", ha="center")
    for key, (x, y) in positions.items():
        node = graph.nodes[key]
        marker = NODE_MARKERS.get(node.shape, "o")
        color = MACRO_COLORS.get(node.macro or "root", "#999999")
        edge_style = "--" if (node.is_start or node.is_end) else "-"
        ax.scatter([x], [y], s=560, marker=marker, c=color,
                   edgecolors="black", linewidths=1.1, linestyle=edge_style, zorder=3)
        label = "root" if node.is_root else f"{node.micro}\n{node.service} | {node.context_id}"
        ax.text(x, y - 0.55, label, fontsize=5.5, ha="center", va="top")
    ax.axis("off")
    ax.set_title("Global attack graph")
    ax.relim()
    ax.autoscale_view()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _matrix_tsv(matrix: RecommenderMatrix) -> str:
    lines = ["macro\tmicro\turgency_score\turgency_class\tseverity_level\tseverity_weight\tnode_count\talert_count"]
    for cell in ranked_cells(matrix):
        lines.append(
            "\t".join(
                [
                    cell.macro.value,
                    cell.micro.value,
                    f"{cell.urgency_score:.6f}",
                    cell.urgency_class.value,
                    cell.severity_level.value,
                    f"{cell.severity_weight:g}",
                    str(cell.node_count),
                    str(cell.alert_count),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _nodes_tsv(graph: GlobalAttackGraph) -> str:
    lines = ["key\tmicro\tservice\tcontext_id\tseverity\tmacro\tshape\tis_start\tis_end\tis_root\tepisodes"]
    for key in sorted(graph.nodes):
        n = graph.nodes[key]
        lines.append(
            "\t".join(
                [
                    key_str(key), n.micro, n.service, str(n.context_id),
                    n.severity.value if n.severity else "", n.macro or "",
                    n.shape, str(int(n.is_start)), str(int(n.is_end)),
                    str(int(n.is_root)), ",".join(map(str, n.episode_refs)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _edges_tsv(graph: GlobalAttackGraph) -> str:
    lines = ["from\tto\tattacker_ip\tvictim_ip\telapsed_seconds\tlabel\tmultiplicity"]
    for e in graph.edges:
        lines.append(
            "\t".join(
                [
                    key_str(e.from_key), key_str(e.to_key), e.attacker_ip,
                    e.victim_ip, f"{e.elapsed:g}", e.label, str(e.multiplicity),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _timeline_tsv(segments: list[TimelineSegment]) -> str:
    lines = ["lane\tcounterpart_ip\trow_label\tmacro\tseverity\tstart_ts\tend_ts\talert_count\tepisode_id"]
    for s in segments:
        lines.append(
            "\t".join(
                [
                    s.lane, s.counterpart_ip, s.row_label, s.macro, s.severity,
                    s.start_ts.isoformat(), s.end_ts.isoformat(),
                    str(s.alert_count), str(s.episode_id),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_report(
    store: Store,
    run_id: str,
    out_dir: Path,
    spec: Optional[FilterSpec] = None,
    perspective: Perspective = Perspective.VICTIM,
) -> list[Path]:
    """Render all figures and tables for a run; returns written paths."""
    spec = spec if spec is not None else FilterSpec()
    snapshot = store.load_analysis(run_id)
    config = store.get_current_config()
    view = filter_graph(snapshot.graph, spec)
    try:
        matrix = build_matrix(snapshot.graph, snapshot.episodes, config, spec)
    except EmptyNodeSetError:
        matrix = zero_matrix(config)
    host = spec.victim_ip if perspective is Perspective.VICTIM else spec.attacker_ip
    lanes, segments = build_timeline(
        snapshot.sequences, perspective, host=host, window=spec.window
    )

    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, text: str) -> None:
        path = out_dir / name
        path.write_text(text)
        written.append(path)

    figure = out_dir / "matrix.png"
    render_matrix_figure(matrix, figure)
    written.append(figure)
    emit("matrix.tsv", _matrix_tsv(matrix))

    figure = out_dir / "timeline.png"
    render_timeline_figure(lanes, segments, figure, perspective)
    written.append(figure)
    emit("timeline.tsv", _timeline_tsv(segments))

    figure = out_dir / "graph.png"
    render_graph_figure(view, figure)
    written.append(figure)
    emit("nodes.tsv", _nodes_tsv(view))
    emit("edges.tsv", _edges_tsv(view))
    return written
