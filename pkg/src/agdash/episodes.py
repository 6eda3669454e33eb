"""Episode mining: burst aggregation per attacker/victim pair.

A scan over each pair's time-ordered alerts grows the current episode while
the stage and service stay the same and the inter-alert gap stays within the
threshold; any stage/service change or larger gap opens a new episode. Every
alert lands in exactly one episode, so alert counts are conserved.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime

from .alerts import NormalizedAlert
from .stages import MacroAIS, MicroAIS, SeverityLevel

DEFAULT_GAP_SECONDS = 300.0


@dataclass
class Episode:
    attacker_ip: str
    victim_ip: str
    micro: MicroAIS
    macro: MacroAIS
    severity: SeverityLevel
    service: str
    start_ts: datetime
    end_ts: datetime
    alert_count: int
    signature_histogram: dict[str, int]
    episode_id: int = -1  # assigned by build_sequences
    context_id: int = 0   # assigned by the context model


@dataclass
class EpisodeSequence:
    attacker_ip: str
    victim_ip: str
    episodes: list[Episode] = field(default_factory=list)


def group_by_pair(
    alerts: list[NormalizedAlert],
) -> dict[tuple[str, str], list[NormalizedAlert]]:
    """Exact partition by (attacker, victim); within-group order preserved."""
    groups: dict[tuple[str, str], list[NormalizedAlert]] = {}
    for alert in alerts:
        groups.setdefault((alert.src_ip, alert.dst_ip), []).append(alert)
    return groups


def mine_episodes(
    pair_alerts: list[NormalizedAlert],
    gap_threshold: float = DEFAULT_GAP_SECONDS,
) -> list[Episode]:
    """Segment one pair's time-ordered alerts into episodes."""
    if gap_threshold <= 0:
        raise ValueError("gap_threshold must be positive")

    episodes: list[Episode] = []
    current: list[NormalizedAlert] = []

    def close() -> None:
        if not current:
            return
        first, last = current[0], current[-1]
        histogram = Counter(a.signature for a in current)
        episodes.append(
            Episode(
                attacker_ip=first.src_ip,
                victim_ip=first.dst_ip,
                micro=first.micro,
                macro=first.macro,
                severity=first.severity,
                service=first.service,
                start_ts=first.timestamp,
                end_ts=last.timestamp,
                alert_count=len(current),
                signature_histogram=dict(sorted(histogram.items())),
            )
        )
        current.clear()

    for alert in pair_alerts:
        if current:
            last = current[-1]
            same_key = alert.micro is last.micro and alert.service == last.service
            gap = (alert.timestamp - last.timestamp).total_seconds()
            if not (same_key and gap <= gap_threshold):
                close()
        current.append(alert)
    close()
    return episodes


def build_sequences(
    episodes_by_pair: dict[tuple[str, str], list[Episode]],
) -> list[EpisodeSequence]:
    """One sequence per pair, pairs ordered lexicographically.

    Episode ids are assigned here, in sequence order, so identical inputs
    always get identical ids.
    """
    sequences = []
    next_id = 0
    for (attacker, victim) in sorted(episodes_by_pair):
        episodes = sorted(episodes_by_pair[(attacker, victim)], key=lambda e: e.start_ts)
        for episode in episodes:
            episode.episode_id = next_id
            next_id += 1
        sequences.append(
            EpisodeSequence(attacker_ip=attacker, victim_ip=victim, episodes=episodes)
        )
    return sequences


def mine_all(
    alerts: list[NormalizedAlert],
    gap_threshold: float = DEFAULT_GAP_SECONDS,
) -> list[EpisodeSequence]:
    """group_by_pair + mine_episodes + build_sequences in one call."""
    groups = group_by_pair(alerts)
    mined = {pair: mine_episodes(group, gap_threshold) for pair, group in groups.items()}
    return build_sequences(mined)
