"""Embedded relational persistence for analysis runs.

One SQLite file holds every run: raw-ish normalized alerts, mined episodes,
the de-duplicated global graph (nodes and edges tables keyed by the dedup
key), and configuration documents. Uploads are content-addressed: the run id
is the SHA-256 of the input bytes, so re-uploading identical bytes finds the
existing run. A run is written in a single transaction; readers only ever
see Complete runs or nothing.
"""

from __future__ import annotations

import hashlib
import json
import os
import sqlite3
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional

from .alerts import NormalizedAlert, parse_timestamp
from .episodes import Episode, EpisodeSequence
from .errors import NotFound, NotReady, StorageError
from .graph import (
    AttackGraphEdge,
    AttackGraphNode,
    EdgeProvenance,
    GlobalAttackGraph,
    NodeKey,
    key_str,
    parse_key,
)
from .stages import MacroAIS, MicroAIS, SeverityLevel
from .urgency import UrgencyConfig

ENV_STORE_PATH = "AGDASH_DB"


def default_store_path() -> str:
    return os.environ.get(ENV_STORE_PATH, "agdash.db")


def content_digest(raw_bytes: bytes) -> str:
    return hashlib.sha256(raw_bytes).hexdigest()


class RunStatus(str, Enum):
    PENDING = "Pending"
    COMPLETE = "Complete"
    FAILED = "Failed"


@dataclass
class AnalysisRun:
    run_id: str
    created_at: str
    filename: str
    digest: str
    status: RunStatus
    alert_count: int = 0
    skipped_count: int = 0
    episode_count: int = 0
    node_count: int = 0
    edge_count: int = 0
    objective_count: int = 0
    gap_threshold: float = 300.0
    merge_min_count: int = 5


@dataclass
class AnalysisSnapshot:
    run: AnalysisRun
    alerts: list[NormalizedAlert]
    episodes: dict[int, Episode]
    sequences: list[EpisodeSequence]
    graph: GlobalAttackGraph
    config: UrgencyConfig


@dataclass(frozen=True)
class SignatureRow:
    signature: str
    start_ts: datetime
    end_ts: datetime
    attacker_ip: str
    victim_ip: str
    frequency: int


_SCHEMA = """
CREATE TABLE IF NOT EXISTS runs (
    run_id TEXT PRIMARY KEY,
    created_at TEXT NOT NULL,
    filename TEXT NOT NULL,
    digest TEXT NOT NULL UNIQUE,
    status TEXT NOT NULL,
    alert_count INTEGER NOT NULL DEFAULT 0,
    skipped_count INTEGER NOT NULL DEFAULT 0,
    episode_count INTEGER NOT NULL DEFAULT 0,
    node_count INTEGER NOT NULL DEFAULT 0,
    edge_count INTEGER NOT NULL DEFAULT 0,
    objective_count INTEGER NOT NULL DEFAULT 0,
    gap_threshold REAL NOT NULL DEFAULT 300.0,
    merge_min_count INTEGER NOT NULL DEFAULT 5,
    config_json TEXT NOT NULL DEFAULT '{}'
);
CREATE TABLE IF NOT EXISTS alerts (
    run_id TEXT NOT NULL,
    idx INTEGER NOT NULL,
    timestamp TEXT NOT NULL,
    src_ip TEXT NOT NULL,
    dst_ip TEXT NOT NULL,
    dst_port INTEGER NOT NULL,
    signature TEXT NOT NULL,
    signature_id INTEGER NOT NULL,
    category TEXT NOT NULL,
    micro TEXT NOT NULL,
    macro TEXT NOT NULL,
    severity TEXT NOT NULL,
    service TEXT NOT NULL,
    PRIMARY KEY (run_id, idx)
);
CREATE TABLE IF NOT EXISTS episodes (
    run_id TEXT NOT NULL,
    episode_id INTEGER NOT NULL,
    attacker_ip TEXT NOT NULL,
    victim_ip TEXT NOT NULL,
    micro TEXT NOT NULL,
    macro TEXT NOT NULL,
    severity TEXT NOT NULL,
    service TEXT NOT NULL,
    start_ts TEXT NOT NULL,
    end_ts TEXT NOT NULL,
    alert_count INTEGER NOT NULL,
    context_id INTEGER NOT NULL,
    histogram_json TEXT NOT NULL,
    PRIMARY KEY (run_id, episode_id)
);
CREATE TABLE IF NOT EXISTS nodes (
    run_id TEXT NOT NULL,
    micro TEXT NOT NULL,
    service TEXT NOT NULL,
    context_id INTEGER NOT NULL,
    severity TEXT,
    macro TEXT,
    shape TEXT NOT NULL,
    is_start INTEGER NOT NULL,
    is_end INTEGER NOT NULL,
    is_root INTEGER NOT NULL,
    episode_refs_json TEXT NOT NULL,
    PRIMARY KEY (run_id, micro, service, context_id)
);
CREATE TABLE IF NOT EXISTS edges (
    run_id TEXT NOT NULL,
    seq INTEGER NOT NULL,
    from_key TEXT NOT NULL,
    to_key TEXT NOT NULL,
    attacker_ip TEXT NOT NULL,
    victim_ip TEXT NOT NULL,
    elapsed REAL NOT NULL,
    label TEXT NOT NULL,
    multiplicity INTEGER NOT NULL,
    provenance_json TEXT NOT NULL,
    PRIMARY KEY (run_id, seq)
);
CREATE TABLE IF NOT EXISTS configs (
    key TEXT PRIMARY KEY,
    config_json TEXT NOT NULL
);
"""


class Store:
    """SQLite-backed store; one connection per operation, WAL for readers."""

    def __init__(self, path: str | Path | None = None):
        self.path = str(path if path is not None else default_store_path())
        with self._session() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.path, timeout=30)
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA foreign_keys=ON")
        return conn

    @contextmanager
    def _session(self) -> Iterator[sqlite3.Connection]:
        """One connection per operation: commit on success, always close."""
        conn = self._connect()
        try:
            with conn:
                yield conn
        finally:
            conn.close()

    # -- write path -----------------------------------------------------

    def find_run_by_digest(self, digest: str) -> Optional[str]:
        with self._session() as conn:
            row = conn.execute(
                "SELECT run_id FROM runs WHERE digest = ? AND status = ?",
                (digest, RunStatus.COMPLETE.value),
            ).fetchone()
        return row["run_id"] if row else None

    def persist_analysis(
        self,
        run: AnalysisRun,
        alerts: list[NormalizedAlert],
        sequences: list[EpisodeSequence],
        graph: GlobalAttackGraph,
        config: UrgencyConfig,
    ) -> str:
        """Write a whole run atomically; returns the (possibly existing) id."""
        existing = self.find_run_by_digest(run.digest)
        if existing is not None:
            return existing

        conn = self._connect()
        try:
            conn.execute("BEGIN IMMEDIATE")
            conn.execute(
                "INSERT INTO runs (run_id, created_at, filename, digest, status,"
                " alert_count, skipped_count, episode_count, node_count, edge_count,"
                " objective_count, gap_threshold, merge_min_count, config_json)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    run.run_id,
                    run.created_at,
                    run.filename,
                    run.digest,
                    RunStatus.COMPLETE.value,
                    run.alert_count,
                    run.skipped_count,
                    run.episode_count,
                    run.node_count,
                    run.edge_count,
                    run.objective_count,
                    run.gap_threshold,
                    run.merge_min_count,
                    json.dumps(config.to_document(), sort_keys=True),
                ),
            )
            self._insert_alerts(conn, run.run_id, alerts)
            self._insert_episodes(conn, run.run_id, sequences)
            self._insert_graph(conn, run.run_id, graph)
            conn.commit()
        except sqlite3.Error as exc:
            conn.rollback()
            raise StorageError(f"persist failed, run rolled back: {exc}") from exc
        except Exception:
            conn.rollback()
            raise
        finally:
            conn.close()
        return run.run_id

    def _insert_alerts(self, conn, run_id: str, alerts: list[NormalizedAlert]) -> None:
        conn.executemany(
            "INSERT INTO alerts VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                (
                    run_id,
                    idx,
                    a.timestamp.isoformat(),
                    a.src_ip,
                    a.dst_ip,
                    a.dst_port,
                    a.signature,
                    a.signature_id,
                    a.category,
                    a.micro.value,
                    a.macro.value,
                    a.severity.value,
                    a.service,
                )
                for idx, a in enumerate(alerts)
            ),
        )

    def _insert_episodes(self, conn, run_id: str, sequences: list[EpisodeSequence]) -> None:
        conn.executemany(
            "INSERT INTO episodes VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                (
                    run_id,
                    e.episode_id,
                    e.attacker_ip,
                    e.victim_ip,
                    e.micro.value,
                    e.macro.value,
                    e.severity.value,
                    e.service,
                    e.start_ts.isoformat(),
                    e.end_ts.isoformat(),
                    e.alert_count,
                    e.context_id,
                    json.dumps(e.signature_histogram, sort_keys=True),
                )
                for seq in sequences
                for e in seq.episodes
            ),
        )

    def _insert_graph(self, conn, run_id: str, graph: GlobalAttackGraph) -> None:
        conn.executemany(
            "INSERT INTO nodes VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                (
                    run_id,
                    n.micro,
                    n.service,
                    n.context_id,
                    n.severity.value if n.severity else None,
                    n.macro,
                    n.shape,
                    int(n.is_start),
                    int(n.is_end),
                    int(n.is_root),
                    json.dumps(n.episode_refs),
                )
                for n in graph.nodes.values()
            ),
        )
        conn.executemany(
            "INSERT INTO edges VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                (
                    run_id,
                    seq,
                    key_str(e.from_key),
                    key_str(e.to_key),
                    e.attacker_ip,
                    e.victim_ip,
                    e.elapsed,
                    e.label,
                    e.multiplicity,
                    json.dumps(
                        [
                            {
                                "attacker_ip": p.attacker_ip,
                                "victim_ip": p.victim_ip,
                                "src_episode": p.src_episode,
                                "dst_episode": p.dst_episode,
                                "start_ts": p.start_ts.isoformat(),
                                "end_ts": p.end_ts.isoformat(),
                            }
                            for p in e.provenance
                        ]
                    ),
                )
                for seq, e in enumerate(graph.edges)
            ),
        )

    # -- read path ------------------------------------------------------

    def _run_row(self, conn, run_id: str) -> sqlite3.Row:
        row = conn.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,)).fetchone()
        if row is None:
            raise NotFound(f"no run {run_id}")
        return row

    def get_run(self, run_id: str) -> AnalysisRun:
        with self._session() as conn:
            row = self._run_row(conn, run_id)
        return _run_from_row(row)

    def list_runs(self) -> list[AnalysisRun]:
        with self._session() as conn:
            rows = conn.execute(
                "SELECT * FROM runs WHERE status = ? ORDER BY created_at, run_id",
                (RunStatus.COMPLETE.value,),
            ).fetchall()
        return [_run_from_row(r) for r in rows]

    def run_count(self) -> int:
        with self._session() as conn:
            row = conn.execute(
                "SELECT COUNT(*) AS n FROM runs WHERE status = ?",
                (RunStatus.COMPLETE.value,),
            ).fetchone()
        return row["n"]

    def load_analysis(self, run_id: str) -> AnalysisSnapshot:
        with self._session() as conn:
            run_row = self._run_row(conn, run_id)
            if run_row["status"] != RunStatus.COMPLETE.value:
                raise NotReady(f"run {run_id} is {run_row['status']}")

            alerts = [
                NormalizedAlert(
                    timestamp=parse_timestamp(r["timestamp"]),
                    src_ip=r["src_ip"],
                    dst_ip=r["dst_ip"],
                    dst_port=r["dst_port"],
                    signature=r["signature"],
                    signature_id=r["signature_id"],
                    category=r["category"],
                    micro=MicroAIS(r["micro"]),
                    macro=MacroAIS(r["macro"]),
                    severity=SeverityLevel(r["severity"]),
                    service=r["service"],
                )
                for r in conn.execute(
                    "SELECT * FROM alerts WHERE run_id = ? ORDER BY idx", (run_id,)
                )
            ]

            episodes: dict[int, Episode] = {}
            for r in conn.execute(
                "SELECT * FROM episodes WHERE run_id = ? ORDER BY episode_id", (run_id,)
            ):
                episode = Episode(
                    attacker_ip=r["attacker_ip"],
                    victim_ip=r["victim_ip"],
                    micro=MicroAIS(r["micro"]),
                    macro=MacroAIS(r["macro"]),
                    severity=SeverityLevel(r["severity"]),
                    service=r["service"],
                    start_ts=parse_timestamp(r["start_ts"]),
                    end_ts=parse_timestamp(r["end_ts"]),
                    alert_count=r["alert_count"],
                    signature_histogram=json.loads(r["histogram_json"]),
                    episode_id=r["episode_id"],
                    context_id=r["context_id"],
                )
                episodes[episode.episode_id] = episode

            nodes: dict[NodeKey, AttackGraphNode] = {}
            for r in conn.execute(
                "SELECT * FROM nodes WHERE run_id = ? ORDER BY micro, service, context_id",
                (run_id,),
            ):
                node = AttackGraphNode(
                    micro=r["micro"],
                    service=r["service"],
                    context_id=r["context_id"],
                    severity=SeverityLevel(r["severity"]) if r["severity"] else None,
                    macro=r["macro"],
                    shape=r["shape"],
                    is_start=bool(r["is_start"]),
                    is_end=bool(r["is_end"]),
                    is_root=bool(r["is_root"]),
                    episode_refs=json.loads(r["episode_refs_json"]),
                )
                nodes[node.key] = node

            edges = [
                AttackGraphEdge(
                    from_key=parse_key(r["from_key"]),
                    to_key=parse_key(r["to_key"]),
                    attacker_ip=r["attacker_ip"],
                    victim_ip=r["victim_ip"],
                    elapsed=r["elapsed"],
                    label=r["label"],
                    multiplicity=r["multiplicity"],
                    provenance=[
                        EdgeProvenance(
                            attacker_ip=p["attacker_ip"],
                            victim_ip=p["victim_ip"],
                            src_episode=p["src_episode"],
                            dst_episode=p["dst_episode"],
                            start_ts=parse_timestamp(p["start_ts"]),
                            end_ts=parse_timestamp(p["end_ts"]),
                        )
                        for p in json.loads(r["provenance_json"])
                    ],
                )
                for r in conn.execute(
                    "SELECT * FROM edges WHERE run_id = ? ORDER BY seq", (run_id,)
                )
            ]

            config = UrgencyConfig.from_document(json.loads(run_row["config_json"]))

        sequences = _rebuild_sequences(episodes)
        return AnalysisSnapshot(
            run=_run_from_row(run_row),
            alerts=alerts,
            episodes=episodes,
            sequences=sequences,
            graph=GlobalAttackGraph(nodes=nodes, edges=edges),
            config=config,
        )

    # -- signature table --------------------------------------------------

    def node_signature_table(self, run_id: str, node_key: NodeKey) -> list[SignatureRow]:
        """One row per (episode, signature) behind the node, in time order."""
        snapshot = self.load_analysis(run_id)
        node = snapshot.graph.nodes.get(node_key)
        if node is None:
            raise NotFound(f"no node {key_str(node_key)} in run {run_id}")
        rows = []
        for ref in sorted(node.episode_refs):
            episode = snapshot.episodes[ref]
            for signature, frequency in sorted(episode.signature_histogram.items()):
                rows.append(
                    SignatureRow(
                        signature=signature,
                        start_ts=episode.start_ts,
                        end_ts=episode.end_ts,
                        attacker_ip=episode.attacker_ip,
                        victim_ip=episode.victim_ip,
                        frequency=frequency,
                    )
                )
        rows.sort(key=lambda r: (r.start_ts, r.attacker_ip, r.victim_ip, r.signature))
        return rows

    # -- configuration -----------------------------------------------------

    def get_current_config(self) -> UrgencyConfig:
        with self._session() as conn:
            row = conn.execute(
                "SELECT config_json FROM configs WHERE key = 'current'"
            ).fetchone()
        if row is None:
            return UrgencyConfig()
        return UrgencyConfig.from_document(json.loads(row["config_json"]))

    def set_current_config(self, config: UrgencyConfig) -> UrgencyConfig:
        """Atomic replace; readers see the whole old or whole new document."""
        payload = json.dumps(config.to_document(), sort_keys=True)
        with self._session() as conn:
            conn.execute(
                "INSERT INTO configs (key, config_json) VALUES ('current', ?)"
                " ON CONFLICT(key) DO UPDATE SET config_json = excluded.config_json",
                (payload,),
            )
        return config


def _run_from_row(row: sqlite3.Row) -> AnalysisRun:
    return AnalysisRun(
        run_id=row["run_id"],
        created_at=row["created_at"],
        filename=row["filename"],
        digest=row["digest"],
        status=RunStatus(row["status"]),
        alert_count=row["alert_count"],
        skipped_count=row["skipped_count"],
        episode_count=row["episode_count"],
        node_count=row["node_count"],
        edge_count=row["edge_count"],
        objective_count=row["objective_count"],
        gap_threshold=row["gap_threshold"],
        merge_min_count=row["merge_min_count"],
    )


def _rebuild_sequences(episodes: dict[int, Episode]) -> list[EpisodeSequence]:
    by_pair: dict[tuple[str, str], list[Episode]] = {}
    for episode in episodes.values():
        by_pair.setdefault((episode.attacker_ip, episode.victim_ip), []).append(episode)
    sequences = []
    for (attacker, victim) in sorted(by_pair):
        members = sorted(by_pair[(attacker, victim)], key=lambda e: (e.start_ts, e.episode_id))
        sequences.append(EpisodeSequence(attacker_ip=attacker, victim_ip=victim, episodes=members))
    return sequences


def export_signature_rows(rows: list[SignatureRow], delimiter: str = "\t") -> str:
    """Delimiter-separated text form of a signature table."""
    header = delimiter.join(
        ["signature", "start_ts", "end_ts", "attacker_ip", "victim_ip", "frequency"]
    )
    lines = [header]
    for row in rows:
        lines.append(
            delimiter.join(
                [
                    row.signature,
                    row.start_ts.isoformat(),
                    row.end_ts.isoformat(),
                    row.attacker_ip,
                    row.victim_ip,
                    str(row.frequency),
                ]
            )
        )
    return "\n".join(lines) + "\n"
