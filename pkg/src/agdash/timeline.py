"""Swimlane timeline derivation from episodes.

Segments map 1:1 onto episodes. The lane is the attacker or the victim host
depending on the chosen perspective, rows inside a lane are labeled
"micro | service", and the segment color class is the tactic, matching the
graph view. Episodes of one (pair, micro, service) never overlap, so rows
stay readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Optional

from .episodes import Episode, EpisodeSequence

TOOLTIP_SIGNATURES = 3


class Perspective(str, Enum):
    ATTACKER = "attacker"
    VICTIM = "victim"


@dataclass(frozen=True)
class TimelineSegment:
    lane: str
    counterpart_ip: str
    row_label: str
    micro: str
    service: str
    macro: str
    severity: str
    context_id: int
    episode_id: int
    alert_count: int
    start_ts: datetime
    end_ts: datetime
    tooltip: tuple[tuple[str, int], ...]  # (signature, frequency), heaviest first


def _segment(episode: Episode, perspective: Perspective) -> TimelineSegment:
    if perspective is Perspective.ATTACKER:
        lane, counterpart = episode.attacker_ip, episode.victim_ip
    else:
        lane, counterpart = episode.victim_ip, episode.attacker_ip
    top = sorted(
        episode.signature_histogram.items(), key=lambda kv: (-kv[1], kv[0])
    )[:TOOLTIP_SIGNATURES]
    return TimelineSegment(
        lane=lane,
        counterpart_ip=counterpart,
        row_label=f"{episode.micro.value} | {episode.service}",
        micro=episode.micro.value,
        service=episode.service,
        macro=episode.macro.value,
        severity=episode.severity.value,
        context_id=episode.context_id,
        episode_id=episode.episode_id,
        alert_count=episode.alert_count,
        start_ts=episode.start_ts,
        end_ts=episode.end_ts,
        tooltip=tuple(top),
    )


def build_timeline(
    sequences: list[EpisodeSequence],
    perspective: Perspective,
    host: Optional[str] = None,
    window: Optional[tuple[datetime, datetime]] = None,
) -> tuple[list[str], list[TimelineSegment]]:
    """(lanes, segments) for the chosen perspective, sorted by start time."""
    segments = []
    for sequence in sequences:
        for episode in sequence.episodes:
            segment = _segment(episode, perspective)
            if host is not None and segment.lane != host:
                continue
            if window is not None:
                t0, t1 = window
                if segment.end_ts < t0 or segment.start_ts > t1:
                    continue
            segments.append(segment)
    segments.sort(key=lambda s: (s.start_ts, s.lane, s.row_label, s.episode_id))
    lanes = sorted({s.lane for s in segments})
    return lanes, segments


def timeline_document(
    lanes: list[str], segments: list[TimelineSegment]
) -> dict:
    """Stable dictionary form for API responses and exports."""
    return {
        "lanes": lanes,
        "segments": [
            {
                "lane": s.lane,
                "counterpart_ip": s.counterpart_ip,
                "row_label": s.row_label,
                "micro": s.micro,
                "service": s.service,
                "macro": s.macro,
                "severity": s.severity,
                "context_id": s.context_id,
                "episode_id": s.episode_id,
                "alert_count": s.alert_count,
                "start_ts": s.start_ts.isoformat(),
                "end_ts": s.end_ts.isoformat(),
                "tooltip": [
                    {"signature": signature, "frequency": frequency}
                    for signature, frequency in s.tooltip
                ],
            }
            for s in segments
        ],
    }
