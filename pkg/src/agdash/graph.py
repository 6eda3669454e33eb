"""Attack graph construction, filtering, layout, and export.

Per-objective graphs collect, for every high-severity episode, the path of
actions that led to it. The global graph merges all of them: nodes are
de-duplicated on (micro, service, context id), parallel transitions between
the same nodes by the same attacker collapse into one edge with a
multiplicity count, and every objective points at a single artificial root
node so the whole view hangs together. Graphs are immutable snapshots once
built; filtering returns a new graph whose edges are a subset of the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Optional

from .alerts import parse_timestamp
from .episodes import Episode, EpisodeSequence
from .errors import ValidationError
from .stages import SeverityLevel

NodeKey = tuple[str, str, int]  # (micro, service, context_id)

ROOT_KEY: NodeKey = ("", "", 0)

SHAPE_BY_SEVERITY = {
    SeverityLevel.LOW: "ellipse",
    SeverityLevel.MEDIUM: "box",
    SeverityLevel.HIGH: "hexagon",
}


class LayoutMethod(str, Enum):
    DIRECTED = "directed"
    HUBSIZE = "hubsize"


class GraphFormat(str, Enum):
    GRAPHVIZ_TEXT = "graphviz"
    STRUCTURED = "structured"


def key_str(key: NodeKey) -> str:
    return f"{key[0]}|{key[1]}|{key[2]}"


def parse_key(text: str) -> NodeKey:
    parts = text.split("|")
    if len(parts) != 3:
        raise ValidationError(f"bad node key: {text!r}")
    try:
        return parts[0], parts[1], int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"bad node key: {text!r}") from exc


@dataclass
class AttackGraphNode:
    micro: str
    service: str
    context_id: int
    severity: Optional[SeverityLevel]
    macro: Optional[str]
    shape: str
    is_start: bool = False
    is_end: bool = False
    is_root: bool = False
    episode_refs: list[int] = field(default_factory=list)

    @property
    def key(self) -> NodeKey:
        return (self.micro, self.service, self.context_id)


@dataclass(frozen=True)
class EdgeProvenance:
    attacker_ip: str
    victim_ip: str
    src_episode: int
    dst_episode: Optional[int]  # None on artificial root edges
    start_ts: datetime
    end_ts: datetime


@dataclass
class AttackGraphEdge:
    from_key: NodeKey
    to_key: NodeKey
    attacker_ip: str
    victim_ip: str
    elapsed: float
    label: str
    multiplicity: int = 1
    provenance: list[EdgeProvenance] = field(default_factory=list)


@dataclass
class ObjectiveAttackGraph:
    victim_ip: str
    objective_micro: str
    objective_service: str
    nodes: dict[NodeKey, AttackGraphNode] = field(default_factory=dict)
    edges: list[AttackGraphEdge] = field(default_factory=list)
    attacker_ips: set[str] = field(default_factory=set)
    # Objective occurrences per end node; becomes root-edge provenance.
    terminals: dict[NodeKey, list[EdgeProvenance]] = field(default_factory=dict)


@dataclass
class GlobalAttackGraph:
    nodes: dict[NodeKey, AttackGraphNode] = field(default_factory=dict)
    edges: list[AttackGraphEdge] = field(default_factory=list)

    @property
    def root(self) -> AttackGraphNode:
        return self.nodes[ROOT_KEY]


@dataclass(frozen=True)
class FilterSpec:
    attacker_ip: Optional[str] = None
    victim_ip: Optional[str] = None
    service: Optional[str] = None
    micro: Optional[str] = None
    window: Optional[tuple[datetime, datetime]] = None

    def is_empty(self) -> bool:
        return (
            self.attacker_ip is None
            and self.victim_ip is None
            and self.service is None
            and self.micro is None
            and self.window is None
        )


def elapsed_label(seconds: float) -> str:
    """Zero-padded HH:MM:SS; sub-second truncated."""
    if seconds < 0:
        raise ValidationError(f"elapsed time must be non-negative: {seconds}")
    total = int(seconds)
    return f"{total // 3600:02d}:{total % 3600 // 60:02d}:{total % 60:02d}"


def _node_for(episode: Episode) -> AttackGraphNode:
    return AttackGraphNode(
        micro=episode.micro.value,
        service=episode.service,
        context_id=episode.context_id,
        severity=episode.severity,
        macro=episode.macro.value,
        shape=SHAPE_BY_SEVERITY[episode.severity],
    )


def _merge_node(graph_nodes: dict[NodeKey, AttackGraphNode], episode: Episode) -> AttackGraphNode:
    node = graph_nodes.get((episode.micro.value, episode.service, episode.context_id))
    if node is None:
        node = _node_for(episode)
        graph_nodes[node.key] = node
    if episode.episode_id not in node.episode_refs:
        node.episode_refs.append(episode.episode_id)
    return node


def build_objective_graphs(sequences: list[EpisodeSequence]) -> list[ObjectiveAttackGraph]:
    """One graph per (victim, objective micro, objective service).

    Every high-severity episode ends an attack path; the whole sub-sequence
    up to it contributes nodes and time-labeled transitions to the graph of
    that objective.
    """
    graphs: dict[tuple[str, str, str], ObjectiveAttackGraph] = {}
    edge_seen: dict[tuple[str, str, str], set] = {}

    for sequence in sequences:
        for position, episode in enumerate(sequence.episodes):
            if episode.severity is not SeverityLevel.HIGH:
                continue
            gkey = (sequence.victim_ip, episode.micro.value, episode.service)
            graph = graphs.get(gkey)
            if graph is None:
                graph = ObjectiveAttackGraph(
                    victim_ip=sequence.victim_ip,
                    objective_micro=episode.micro.value,
                    objective_service=episode.service,
                )
                graphs[gkey] = graph
                edge_seen[gkey] = set()
            graph.attacker_ips.add(sequence.attacker_ip)

            path = sequence.episodes[: position + 1]
            for step, member in enumerate(path):
                node = _merge_node(graph.nodes, member)
                if step == 0:
                    node.is_start = True
                if step == len(path) - 1:
                    node.is_end = True
                    graph.terminals.setdefault(node.key, []).append(
                        EdgeProvenance(
                            attacker_ip=sequence.attacker_ip,
                            victim_ip=sequence.victim_ip,
                            src_episode=member.episode_id,
                            dst_episode=None,
                            start_ts=member.start_ts,
                            end_ts=member.end_ts,
                        )
                    )
            for src, dst in zip(path, path[1:]):
                identity = (
                    key_str(_key_of(src)),
                    key_str(_key_of(dst)),
                    sequence.attacker_ip,
                    src.episode_id,
                    dst.episode_id,
                )
                if identity in edge_seen[gkey]:
                    continue
                edge_seen[gkey].add(identity)
                gap = max(0.0, (dst.start_ts - src.end_ts).total_seconds())
                graph.edges.append(
                    AttackGraphEdge(
                        from_key=_key_of(src),
                        to_key=_key_of(dst),
                        attacker_ip=sequence.attacker_ip,
                        victim_ip=sequence.victim_ip,
                        elapsed=gap,
                        label=elapsed_label(gap),
                        provenance=[
                            EdgeProvenance(
                                attacker_ip=sequence.attacker_ip,
                                victim_ip=sequence.victim_ip,
                                src_episode=src.episode_id,
                                dst_episode=dst.episode_id,
                                start_ts=src.start_ts,
                                end_ts=dst.end_ts,
                            )
                        ],
                    )
                )

    return [graphs[k] for k in sorted(graphs)]


def _key_of(episode: Episode) -> NodeKey:
    return (episode.micro.value, episode.service, episode.context_id)


def _make_root() -> AttackGraphNode:
    return AttackGraphNode(
        micro="",
        service="",
        context_id=0,
        severity=None,
        macro=None,
        shape="ellipse",
        is_root=True,
    )


def build_global_graph(objective_graphs: list[ObjectiveAttackGraph]) -> GlobalAttackGraph:
    """Union of all objective graphs under the artificial root node."""
    nodes: dict[NodeKey, AttackGraphNode] = {}
    collapsed: dict[tuple[NodeKey, NodeKey, str], AttackGraphEdge] = {}
    # The same transition reaches several objective graphs when paths share
    # a prefix; provenance identity keeps the multiplicity honest.
    seen_prov: set[tuple] = set()
    # Terminal occurrences per objective node feed the root edge provenance.
    terminal: dict[NodeKey, list[EdgeProvenance]] = {}

    for graph in objective_graphs:
        for key, node in graph.nodes.items():
            merged = nodes.get(key)
            if merged is None:
                merged = replace(node, episode_refs=[])
                nodes[key] = merged
            merged.is_start = merged.is_start or node.is_start
            merged.is_end = merged.is_end or node.is_end
            for ref in node.episode_refs:
                if ref not in merged.episode_refs:
                    merged.episode_refs.append(ref)
        for edge in graph.edges:
            ekey = (edge.from_key, edge.to_key, edge.attacker_ip)
            fresh = [
                p
                for p in edge.provenance
                if (ekey, p.src_episode, p.dst_episode, p.victim_ip) not in seen_prov
            ]
            for p in fresh:
                seen_prov.add((ekey, p.src_episode, p.dst_episode, p.victim_ip))
            existing = collapsed.get(ekey)
            if existing is None:
                if fresh:
                    collapsed[ekey] = replace(
                        edge, provenance=fresh, multiplicity=len(fresh)
                    )
            elif fresh:
                existing.multiplicity += len(fresh)
                existing.provenance.extend(fresh)
                if edge.elapsed < existing.elapsed:
                    existing.elapsed = edge.elapsed
                    existing.label = edge.label
                    existing.victim_ip = edge.victim_ip

    for graph in objective_graphs:
        for key, occurrences in graph.terminals.items():
            terminal.setdefault(key, []).extend(occurrences)

    for node in nodes.values():
        node.episode_refs.sort()

    root = _make_root()
    nodes[ROOT_KEY] = root
    edges = list(collapsed.values())
    for key in sorted(terminal):
        prov = sorted(set(terminal[key]), key=lambda p: (p.attacker_ip, p.victim_ip, p.src_episode))
        edges.append(
            AttackGraphEdge(
                from_key=key,
                to_key=ROOT_KEY,
                attacker_ip="",
                victim_ip="",
                elapsed=0.0,
                label="00:00:00",
                multiplicity=len(prov),
                provenance=list(prov),
            )
        )

    # Canonical order throughout: exports, persistence, and reloads all see
    # the same edge list, so round trips compare equal.
    edges.sort(key=lambda e: (e.from_key, e.to_key, e.attacker_ip))
    for edge in edges:
        edge.provenance.sort(
            key=lambda p: (p.start_ts, p.attacker_ip, p.victim_ip, p.src_episode)
        )
    ordered = {k: nodes[k] for k in sorted(nodes)}
    return GlobalAttackGraph(nodes=ordered, edges=edges)


def _edge_satisfies(edge: AttackGraphEdge, spec: FilterSpec) -> bool:
    if spec.service is not None:
        if spec.service not in (edge.from_key[1], edge.to_key[1]):
            return False
    for prov in edge.provenance:
        if spec.attacker_ip is not None and prov.attacker_ip != spec.attacker_ip:
            continue
        if spec.victim_ip is not None and prov.victim_ip != spec.victim_ip:
            continue
        if spec.window is not None:
            t0, t1 = spec.window
            if prov.end_ts < t0 or prov.start_ts > t1:
                continue
        return True
    return False


def _micro_path_edges(
    edges: list[AttackGraphEdge],
    nodes: dict[NodeKey, AttackGraphNode],
    micro: str,
) -> list[AttackGraphEdge]:
    """Edges lying on some path through a node with the given micro."""
    marked = {k for k, n in nodes.items() if n.micro == micro and not n.is_root}
    if not marked:
        return []
    forward: dict[NodeKey, set[NodeKey]] = {}
    backward: dict[NodeKey, set[NodeKey]] = {}
    for edge in edges:
        forward.setdefault(edge.from_key, set()).add(edge.to_key)
        backward.setdefault(edge.to_key, set()).add(edge.from_key)

    def closure(start: set[NodeKey], adj: dict[NodeKey, set[NodeKey]]) -> set[NodeKey]:
        seen = set(start)
        frontier = list(start)
        while frontier:
            node = frontier.pop()
            for neighbor in adj.get(node, ()):
                if neighbor not in seen:
                    seen.add(neighbor)
                    frontier.append(neighbor)
        return seen

    can_reach_marked = closure(marked, backward)   # nodes with a path into the micro
    reached_from_marked = closure(marked, forward)  # nodes on paths out of the micro
    return [
        e
        for e in edges
        if e.to_key in can_reach_marked or e.from_key in reached_from_marked
    ]


def filter_graph(graph: GlobalAttackGraph, spec: FilterSpec) -> GlobalAttackGraph:
    """Restrict the view; the result's edges are a subset of the input's.

    Attacker/victim/service/window act on edge provenance. The micro filter
    keeps whole paths that contain the micro, so a redirect from the matrix
    shows every attack the technique participates in.
    """
    if spec.is_empty():
        return graph

    kept = [e for e in graph.edges if _edge_satisfies(e, spec)]
    if spec.micro is not None:
        kept = _micro_path_edges(kept, graph.nodes, spec.micro)

    nodes: dict[NodeKey, AttackGraphNode] = {}
    for edge in kept:
        for key in (edge.from_key, edge.to_key):
            nodes[key] = graph.nodes[key]
    nodes[ROOT_KEY] = graph.nodes[ROOT_KEY]
    order = sorted(nodes)
    return GlobalAttackGraph(nodes={k: nodes[k] for k in order}, edges=kept)


def _tarjan_sccs(keys: list[NodeKey], forward: dict[NodeKey, set[NodeKey]]) -> dict[NodeKey, int]:
    """Iterative Tarjan; returns node -> component id."""
    index: dict[NodeKey, int] = {}
    low: dict[NodeKey, int] = {}
    on_stack: set[NodeKey] = set()
    stack: list[NodeKey] = []
    component: dict[NodeKey, int] = {}
    counter = 0
    comp_count = 0

    for root in keys:
        if root in index:
            continue
        work = [(root, iter(sorted(forward.get(root, ()))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(sorted(forward.get(child, ())))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component[member] = comp_count
                    if member == node:
                        break
                comp_count += 1
    return component


def assign_layout_levels(
    graph: GlobalAttackGraph, method: LayoutMethod = LayoutMethod.HUBSIZE
) -> dict[NodeKey, int]:
    """Hierarchical layer for every node.

    Directed is the longest-path layering from source nodes (cycles share
    their condensation's level); Hubsize orders nodes by total degree,
    largest hubs first, ties broken by key.
    """
    keys = sorted(graph.nodes)
    if method is LayoutMethod.HUBSIZE:
        degree: dict[NodeKey, int] = {k: 0 for k in keys}
        for edge in graph.edges:
            degree[edge.from_key] += 1
            degree[edge.to_key] += 1
        ranked = sorted(keys, key=lambda k: (-degree[k], k))
        return {k: i for i, k in enumerate(ranked)}

    forward: dict[NodeKey, set[NodeKey]] = {k: set() for k in keys}
    for edge in graph.edges:
        if edge.from_key != edge.to_key:
            forward[edge.from_key].add(edge.to_key)

    component = _tarjan_sccs(keys, forward)
    comp_forward: dict[int, set[int]] = {}
    comp_indegree: dict[int, int] = {component[k]: 0 for k in keys}
    for src, targets in forward.items():
        for dst in targets:
            a, b = component[src], component[dst]
            if a != b and b not in comp_forward.setdefault(a, set()):
                comp_forward[a].add(b)
                comp_indegree[b] += 1

    level: dict[int, int] = {}
    ready = sorted(c for c, deg in comp_indegree.items() if deg == 0)
    for comp in ready:
        level[comp] = 0
    queue = list(ready)
    while queue:
        comp = queue.pop(0)
        for nxt in sorted(comp_forward.get(comp, ())):
            level[nxt] = max(level.get(nxt, 0), level[comp] + 1)
            comp_indegree[nxt] -= 1
            if comp_indegree[nxt] == 0:
                queue.append(nxt)
    return {k: level[component[k]] for k in keys}


def _node_doc(node: AttackGraphNode, highlight_micro: Optional[str]) -> dict:
    doc = {
        "key": key_str(node.key),
        "micro": node.micro,
        "service": node.service,
        "context_id": node.context_id,
        "severity": node.severity.value if node.severity else None,
        "macro": node.macro,
        "shape": node.shape,
        "color_class": node.macro if node.macro else "root",
        "is_start": node.is_start,
        "is_end": node.is_end,
        "is_root": node.is_root,
        "episode_refs": list(node.episode_refs),
    }
    if highlight_micro is not None:
        doc["highlight"] = node.micro == highlight_micro and not node.is_root
    return doc


def _edge_doc(edge: AttackGraphEdge) -> dict:
    return {
        "from": key_str(edge.from_key),
        "to": key_str(edge.to_key),
        "attacker_ip": edge.attacker_ip,
        "victim_ip": edge.victim_ip,
        "elapsed_seconds": edge.elapsed,
        "label": edge.label,
        "multiplicity": edge.multiplicity,
        "provenance": [
            {
                "attacker_ip": p.attacker_ip,
                "victim_ip": p.victim_ip,
                "src_episode": p.src_episode,
                "dst_episode": p.dst_episode,
                "start_ts": p.start_ts.isoformat(),
                "end_ts": p.end_ts.isoformat(),
            }
            for p in edge.provenance
        ],
    }


def graph_document(
    graph: GlobalAttackGraph,
    levels: Optional[dict[NodeKey, int]] = None,
    highlight_micro: Optional[str] = None,
) -> dict:
    """Stable dictionary form of a graph (nodes and edges sorted)."""
    node_keys = sorted(graph.nodes)
    edges = sorted(
        graph.edges, key=lambda e: (e.from_key, e.to_key, e.attacker_ip)
    )
    doc = {
        "format": "agdash-graph/1",
        "root": key_str(ROOT_KEY),
        "nodes": [_node_doc(graph.nodes[k], highlight_micro) for k in node_keys],
        "edges": [_edge_doc(e) for e in edges],
    }
    if levels is not None:
        doc["levels"] = {key_str(k): levels[k] for k in node_keys}
    return doc


def export_graph(graph: GlobalAttackGraph, format: GraphFormat) -> bytes:
    """Deterministic byte export; structured form round-trips losslessly."""
    if format is GraphFormat.STRUCTURED:
        doc = graph_document(graph)
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if format is GraphFormat.GRAPHVIZ_TEXT:
        return _to_graphviz(graph).encode("utf-8")
    raise ValidationError(f"unknown graph format: {format!r}")


def _to_graphviz(graph: GlobalAttackGraph) -> str:
    lines = ["digraph attack_graph {", '  rankdir="TB";']
    for key in sorted(graph.nodes):
        node = graph.nodes[key]
        if node.is_root:
            label = "root"
        else:
            label = f"{node.micro}\\n{node.service} | {node.context_id}"
        style = ',style="dotted"' if (node.is_start or node.is_end) else ""
        macro = node.macro if node.macro else "root"
        lines.append(
            f'  "{key_str(key)}" [label="{label}",shape={node.shape},class="{macro}"{style}];'
        )
    for edge in sorted(graph.edges, key=lambda e: (e.from_key, e.to_key, e.attacker_ip)):
        label = edge.label
        if edge.multiplicity > 1:
            label += f" (x{edge.multiplicity})"
        lines.append(
            f'  "{key_str(edge.from_key)}" -> "{key_str(edge.to_key)}" [label="{label}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_graph(data: bytes) -> GlobalAttackGraph:
    """Inverse of the structured export."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"not a structured graph document: {exc}") from exc
    if doc.get("format") != "agdash-graph/1":
        raise ValidationError("unknown structured graph format tag")

    nodes: dict[NodeKey, AttackGraphNode] = {}
    for nd in doc["nodes"]:
        node = AttackGraphNode(
            micro=nd["micro"],
            service=nd["service"],
            context_id=nd["context_id"],
            severity=SeverityLevel(nd["severity"]) if nd["severity"] else None,
            macro=nd["macro"],
            shape=nd["shape"],
            is_start=nd["is_start"],
            is_end=nd["is_end"],
            is_root=nd["is_root"],
            episode_refs=list(nd["episode_refs"]),
        )
        nodes[node.key] = node
    edges = [
        AttackGraphEdge(
            from_key=parse_key(ed["from"]),
            to_key=parse_key(ed["to"]),
            attacker_ip=ed["attacker_ip"],
            victim_ip=ed["victim_ip"],
            elapsed=ed["elapsed_seconds"],
            label=ed["label"],
            multiplicity=ed["multiplicity"],
            provenance=[
                EdgeProvenance(
                    attacker_ip=p["attacker_ip"],
                    victim_ip=p["victim_ip"],
                    src_episode=p["src_episode"],
                    dst_episode=p["dst_episode"],
                    start_ts=parse_timestamp(p["start_ts"]),
                    end_ts=parse_timestamp(p["end_ts"]),
                )
                for p in ed["provenance"]
            ],
        )
        for ed in doc["edges"]
    ]
    return GlobalAttackGraph(nodes=nodes, edges=edges)
