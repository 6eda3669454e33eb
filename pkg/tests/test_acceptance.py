"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import itertools
import json
import os
import random
import time
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from agdash.alerts import parse_alert_file
from agdash.context import assign_context_ids, build_suffix_model
from agdash.episodes import mine_all
from agdash.graph import (
    ROOT_KEY,
    FilterSpec,
    GraphFormat,
    LayoutMethod,
    assign_layout_levels,
    build_global_graph,
    build_objective_graphs,
    export_graph,
    filter_graph,
)
from agdash.pipeline import AnalysisOptions, analyze_bytes
from agdash.stages import MicroAIS, SeverityLevel
from agdash.store import Store
from agdash.urgency import (
    UrgencyConfig,
    build_matrix,
    compute_prevalence,
    compute_urgency,
    matrix_document,
    ranked_cells,
)
from scenarios import random_bytes
from test_graph import _graph_from_dag, brute_force_longest_path_levels
from test_urgency import random_node_set
from usecase import GAP_SECONDS, MERGE_MIN_COUNT, usecase_bytes


def _report(criterion: int, message: str) -> None:
    print(f"\nACCEPTANCE {criterion}: PASS - {message}")


def test_criterion_1_urgency_oracle_equivalence():
    """compute_urgency equals a count-and-multiply oracle within 1e-9."""
    rng = random.Random(20180101)
    config = UrgencyConfig()
    started = time.monotonic()
    for _ in range(1000):
        nodes = random_node_set(rng, rng.randint(1, 500))
        total = len(nodes)
        prevalence_sum = 0.0
        for micro in MicroAIS:
            count = sum(1 for n in nodes if n.micro == micro.value)
            oracle = config.weight_of(micro) * (count / total)
            got = compute_urgency(micro, config, nodes)
            assert abs(got - oracle) <= 1e-9
            prevalence_sum += compute_prevalence(nodes, micro)
        assert abs(prevalence_sum - 1.0) <= 1e-9
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s, budget 5s"
    _report(1, f"1000 node sets, |score-oracle| <= 1e-9, sum(prevalence)=1 +- 1e-9, {elapsed:.2f}s")


def test_criterion_2_usecase_reproduction(usecase_store, usecase_run_id):
    """Victim-filtered matrix ranks exfiltration first; http exfil paths
    pass privilege escalation and data manipulation."""
    snapshot = usecase_store.load_analysis(usecase_run_id)
    matrix = build_matrix(
        snapshot.graph, snapshot.episodes, UrgencyConfig(), FilterSpec(victim_ip="10.0.0.20")
    )
    ranking = [
        (c.micro.value, round(c.urgency_score, 9))
        for c in ranked_cells(matrix)
        if c.node_count > 0
    ]
    expected = [
        ("Data Exfiltration", round(3 / 15, 9)),
        ("Data Manipulation", round(2 / 15, 9)),
        ("Data Delivery", round(1 / 15, 9)),
        ("Information Discovery", round(1 / 15, 9)),
        ("Network DoS", round(1 / 15, 9)),
        ("Root Privilege Escalation", round(1 / 15, 9)),
        ("User Privilege Escalation", round(1 / 15, 9)),
        ("Account Manipulation", round(0.5 / 15, 9)),
        ("Service Discovery", round(0.5 / 15, 9)),
    ]
    assert ranking == expected, f"rank order diverged: {ranking}"
    assert ranking[0][0] == "Data Exfiltration"

    view = filter_graph(
        snapshot.graph, FilterSpec(micro="Data Exfiltration", service="http")
    )
    preds: dict = {}
    for edge in view.edges:
        preds.setdefault(edge.to_key, set()).add(edge.from_key)

    def ancestors(key):
        seen, frontier = set(), [key]
        while frontier:
            node = frontier.pop()
            for p in preds.get(node, ()):
                if p not in seen:
                    seen.add(p)
                    frontier.append(p)
        return seen

    exfil_http = [
        k for k, n in view.nodes.items()
        if n.micro == "Data Exfiltration" and n.service == "http"
    ]
    assert exfil_http, "no exfiltration-over-http nodes in the filtered view"
    for key in exfil_http:
        micros = {view.nodes[a].micro for a in ancestors(key) if a in view.nodes}
        assert "Root Privilege Escalation" in micros
        assert "Data Manipulation" in micros
    _report(2, "victim 10.0.0.20 ranks Data Exfiltration first (exact order); "
               "http exfil paths contain Root Privilege Escalation and Data Manipulation")


def _compression_scenario() -> bytes:
    """16 attacker/victim pairs repeating one canonical 5-stage route,
    125 alerts per episode: 10,000 alerts, a handful of node keys."""
    base = datetime(2021, 1, 1, tzinfo=timezone.utc)
    stages = [
        ("ET SCAN Nikto Web App Scan in Progress", "Detection of a Network Scan"),
        ("ET INFO Remote Directory Listing Retrieved", "Attempted Information Leak"),
        ("GPL EXPLOIT CodeRed v2 root.exe access", "Attempted Administrator Privilege Gain"),
        ("ET WEB_SERVER Possible SQL Injection UPDATE statement in URI", "Misc activity"),
        ("ET ATTACK_RESPONSE Possible Database Dump Download", "Potential Corporate Privacy Violation"),
    ]
    records = []
    for a in range(8):
        for v in range(2):
            for stage_idx, (signature, category) in enumerate(stages):
                start = base + timedelta(minutes=30 * stage_idx, seconds=a * 7 + v * 3)
                for i in range(125):
                    ts = start + timedelta(seconds=i * 2)
                    records.append(
                        {
                            "timestamp": ts.isoformat(),
                            "src_ip": f"10.9.0.{a + 1}",
                            "dest_ip": f"10.8.0.{v + 1}",
                            "dest_port": 80,
                            "alert": {
                                "signature": signature,
                                "signature_id": 1000 + stage_idx,
                                "category": category,
                            },
                        }
                    )
    return ("\n".join(json.dumps(r) for r in records) + "\n").encode()


def test_criterion_3_compression(tmp_path):
    """Global graph nodes <= 1% of a 10,000-alert scenario, under 10s."""
    raw = _compression_scenario()
    started = time.monotonic()
    store = Store(tmp_path / "compression.db")
    outcome = analyze_bytes(raw, "big.json", store, AnalysisOptions())
    elapsed = time.monotonic() - started
    run = outcome.run
    assert run.alert_count == 10_000
    assert run.node_count <= run.alert_count * 0.01, (
        f"{run.node_count} nodes from {run.alert_count} alerts"
    )
    assert elapsed < 10.0, f"took {elapsed:.2f}s, budget 10s"
    _report(3, f"{run.alert_count} alerts compressed to {run.node_count} nodes "
               f"({100 * run.node_count / run.alert_count:.2f}%), {elapsed:.2f}s")


def test_criterion_4_pipeline_determinism(tmp_path):
    """Identical bytes in two fresh stores give byte-identical artifacts."""
    raw = usecase_bytes()
    options = AnalysisOptions(gap_threshold=GAP_SECONDS, merge_min_count=MERGE_MIN_COUNT)
    artifacts = []
    for name in ("one", "two"):
        store = Store(tmp_path / f"{name}.db")
        run = analyze_bytes(raw, "usecase.json", store, options).run
        snapshot = store.load_analysis(run.run_id)
        matrix = build_matrix(snapshot.graph, snapshot.episodes, UrgencyConfig())
        artifacts.append(
            (
                export_graph(snapshot.graph, GraphFormat.STRUCTURED),
                export_graph(snapshot.graph, GraphFormat.GRAPHVIZ_TEXT),
                json.dumps(matrix_document(matrix), sort_keys=True).encode(),
                run.run_id,
            )
        )
    assert artifacts[0] == artifacts[1]
    # same store: second upload reuses the run outright
    store = Store(tmp_path / "one.db")
    again = analyze_bytes(raw, "usecase.json", store, options)
    assert not again.created and again.run.run_id == artifacts[0][3]
    _report(4, "graph exports and matrix documents byte-identical across uploads")


def test_criterion_5_graph_invariants_suite():
    """Key uniqueness, single root, High->root, filter soundness,
    empty-filter identity over 200 random scenarios."""
    rng = random.Random(55_2023)
    for scenario in range(200):
        alerts, _ = parse_alert_file(random_bytes(rng, rng.randint(5, 90)))
        sequences = mine_all(alerts, gap_threshold=rng.uniform(60, 600))
        model = build_suffix_model(sequences, merge_min_count=rng.randint(1, 5))
        assign_context_ids(sequences, model)
        graph = build_global_graph(build_objective_graphs(sequences))

        keys = list(graph.nodes)
        assert len(keys) == len(set(keys))
        assert sum(1 for n in graph.nodes.values() if n.is_root) == 1
        to_root = {e.from_key for e in graph.edges if e.to_key == ROOT_KEY}
        for key, node in graph.nodes.items():
            if node.severity is SeverityLevel.HIGH:
                assert key in to_root

        assert filter_graph(graph, FilterSpec()) is graph
        spec = FilterSpec(
            attacker_ip=rng.choice([None, "10.1.0.5", "10.1.0.6", "10.1.0.7"]),
            victim_ip=rng.choice([None, "10.2.0.10", "10.2.0.11"]),
            service=rng.choice([None, "http", "mongodb", "ssh"]),
            micro=rng.choice([None, "Data Exfiltration", "Network DoS"]),
        )
        filtered = filter_graph(graph, spec)
        edge_ids = {id(e) for e in graph.edges}
        assert all(id(e) in edge_ids for e in filtered.edges)
        assert ROOT_KEY in filtered.nodes
        incident = {k for e in filtered.edges for k in (e.from_key, e.to_key)}
        assert set(filtered.nodes) == incident | {ROOT_KEY}
    _report(5, "200 random scenarios satisfy dedup/root/filter invariants")


def test_criterion_6_episode_conservation_and_monotonicity():
    """Alert counts conserved; smaller gap thresholds never merge bursts."""
    rng = random.Random(66_2023)
    for scenario in range(60):
        alerts, _ = parse_alert_file(random_bytes(rng, rng.randint(0, 120)))
        thresholds = sorted([rng.uniform(5, 400), rng.uniform(5, 400)])
        counts = []
        for threshold in thresholds:
            sequences = mine_all(alerts, gap_threshold=threshold)
            episodes = [e for s in sequences for e in s.episodes]
            assert sum(e.alert_count for e in episodes) == len(alerts)
            counts.append(len(episodes))
        assert counts[0] >= counts[1], "smaller threshold produced fewer episodes"
    _report(6, "conservation and gap-threshold monotonicity hold on 60 random scenarios")


def test_criterion_7_directed_layout_exact():
    """Directed levels equal exhaustive longest-path levels on DAGs <= 12 nodes."""
    rng = random.Random(77_2023)
    for _ in range(150):
        n = rng.randint(1, 12)
        edges = [
            (a, b)
            for a, b in itertools.combinations(range(n), 2)
            if rng.random() < rng.uniform(0.1, 0.5)
        ]
        graph = _graph_from_dag(edges, n)
        levels = assign_layout_levels(graph, LayoutMethod.DIRECTED)
        expected = brute_force_longest_path_levels(edges, n)
        for i in range(n):
            assert levels[(f"M{i}", "svc", 0)] == expected[i]
    _report(7, "directed layout equals brute-force longest path on 150 random DAGs")


CPTC_ENV = "CPTC2018_TEAM1"


def test_criterion_8_cptc_dataset_conditional(tmp_path):
    """With the CPTC-2018 Team 1 file supplied, the parsed alert count is
    exactly 81,373; the objective graph count is reported, not asserted."""
    path = os.environ.get(CPTC_ENV)
    if not path:
        pytest.skip(f"{CPTC_ENV} not set; dataset-conditional criterion skipped")
    raw = Path(path).read_bytes()
    alerts, skipped = parse_alert_file(raw)
    assert len(alerts) == 81_373, f"parsed {len(alerts)} alerts, expected 81373"
    store = Store(tmp_path / "cptc.db")
    outcome = analyze_bytes(raw, Path(path).name, store, AnalysisOptions())
    _report(8, f"CPTC Team 1: 81373 alerts parsed ({skipped} skipped records); "
               f"objective graphs built: {outcome.run.objective_count} "
               "(not asserted; simplified context model)")
