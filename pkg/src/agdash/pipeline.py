"""End-to-end analysis: parse, mine, contextualize, build, score, persist.

Uploads are deduplicated by content digest and at most one analysis runs per
digest at a time; identical bytes always come back as the same run. Episode
severities are fixed at analysis time from the configuration then in force,
so a Complete run's derived data never changes afterwards.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from .alerts import ParsePolicy, parse_alert_file
from .context import DEFAULT_MERGE_MIN_COUNT, assign_context_ids, build_suffix_model
from .episodes import DEFAULT_GAP_SECONDS, mine_all
from .graph import GlobalAttackGraph, build_global_graph, build_objective_graphs
from .store import AnalysisRun, RunStatus, Store, content_digest
from .urgency import UrgencyConfig

_locks_guard = threading.Lock()
_digest_locks: dict[str, threading.Lock] = {}


def _lock_for(digest: str) -> threading.Lock:
    with _locks_guard:
        lock = _digest_locks.get(digest)
        if lock is None:
            lock = threading.Lock()
            _digest_locks[digest] = lock
        return lock


@dataclass(frozen=True)
class AnalysisOptions:
    policy: ParsePolicy = ParsePolicy.SKIP
    gap_threshold: float = DEFAULT_GAP_SECONDS
    merge_min_count: int = DEFAULT_MERGE_MIN_COUNT


@dataclass(frozen=True)
class AnalysisOutcome:
    run: AnalysisRun
    created: bool


def analyze_bytes(
    raw_bytes: bytes,
    filename: str,
    store: Store,
    options: AnalysisOptions = AnalysisOptions(),
    config: Optional[UrgencyConfig] = None,
) -> AnalysisOutcome:
    """Run the full pipeline on an uploaded file and persist the result."""
    digest = content_digest(raw_bytes)
    with _lock_for(digest):
        existing = store.find_run_by_digest(digest)
        if existing is not None:
            return AnalysisOutcome(run=store.get_run(existing), created=False)

        if config is None:
            config = store.get_current_config()

        alerts, skipped = parse_alert_file(raw_bytes, policy=options.policy)
        sequences = mine_all(alerts, gap_threshold=options.gap_threshold)
        for sequence in sequences:
            for episode in sequence.episodes:
                episode.severity = config.level_of(episode.micro)
        model = build_suffix_model(sequences, merge_min_count=options.merge_min_count)
        assign_context_ids(sequences, model)

        objective_graphs = build_objective_graphs(sequences)
        graph = build_global_graph(objective_graphs)

        run = AnalysisRun(
            run_id=digest,
            created_at=datetime.now(timezone.utc).isoformat(),
            filename=filename,
            digest=digest,
            status=RunStatus.COMPLETE,
            alert_count=len(alerts),
            skipped_count=skipped,
            episode_count=sum(len(s.episodes) for s in sequences),
            node_count=len(graph.nodes) - 1,  # artificial root is not an action
            edge_count=len(graph.edges),
            objective_count=len(objective_graphs),
            gap_threshold=options.gap_threshold,
            merge_min_count=options.merge_min_count,
        )
        store.persist_analysis(run, alerts, sequences, graph, config)
        return AnalysisOutcome(run=run, created=True)


def rebuild_graph(sequences) -> GlobalAttackGraph:
    """Convenience for tests and oracles: graphs from annotated sequences."""
    return build_global_graph(build_objective_graphs(sequences))
