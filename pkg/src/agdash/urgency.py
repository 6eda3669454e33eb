"""Urgency scoring and the analyst matrix.

The urgency of a technique is its severity weight times its normalized
prevalence, where prevalence counts attack graph nodes carrying the
technique over the total node count (artificial root excluded). Severity
levels, weights, and the class ranges that shade the matrix are one
configuration document that analysts can replace atomically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from .episodes import Episode
from .errors import ConfigError, EmptyNodeSetError, ValidationError
from .graph import AttackGraphNode, FilterSpec, GlobalAttackGraph, filter_graph
from .stages import (
    DEFAULT_SEVERITY,
    MACRO_ORDER,
    MacroAIS,
    MicroAIS,
    SeverityLevel,
    micros_of,
)


class UrgencyClass(str, Enum):
    MINOR = "Minor"
    MAJOR = "Major"
    CRITICAL = "Critical"
    ZERO = "Zero"


DEFAULT_WEIGHTS: dict[SeverityLevel, float] = {
    SeverityLevel.LOW: 0.25,
    SeverityLevel.MEDIUM: 0.5,
    SeverityLevel.HIGH: 1.0,
}

# Half-open [lo, hi) intervals, lower-inclusive; the last one closes at 1.
DEFAULT_RANGES: dict[UrgencyClass, tuple[float, float]] = {
    UrgencyClass.MINOR: (0.0, 0.05),
    UrgencyClass.MAJOR: (0.05, 0.2),
    UrgencyClass.CRITICAL: (0.2, 1.0),
}

_RANGE_ORDER = (UrgencyClass.MINOR, UrgencyClass.MAJOR, UrgencyClass.CRITICAL)


@dataclass(frozen=True)
class UrgencyConfig:
    severity_level: dict[MicroAIS, SeverityLevel] = field(
        default_factory=lambda: dict(DEFAULT_SEVERITY)
    )
    severity_weight: dict[SeverityLevel, float] = field(
        default_factory=lambda: dict(DEFAULT_WEIGHTS)
    )
    urgency_ranges: dict[UrgencyClass, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_RANGES)
    )

    def level_of(self, micro: MicroAIS) -> SeverityLevel:
        return self.severity_level.get(micro, DEFAULT_SEVERITY[micro])

    def weight_of(self, micro: MicroAIS) -> float:
        return self.severity_weight[self.level_of(micro)]

    def to_document(self) -> dict:
        return {
            "severity_levels": {m.value: lvl.value for m, lvl in sorted(self.severity_level.items())},
            "severity_weights": {lvl.value: w for lvl, w in sorted(self.severity_weight.items())},
            "urgency_ranges": {
                cls.value: [lo, hi] for cls, (lo, hi) in sorted(self.urgency_ranges.items())
            },
        }

    @classmethod
    def from_document(cls, doc: Mapping) -> "UrgencyConfig":
        try:
            levels = dict(DEFAULT_SEVERITY)
            for name, level in doc.get("severity_levels", {}).items():
                levels[MicroAIS(name)] = SeverityLevel(level)
            weights = dict(DEFAULT_WEIGHTS)
            for name, weight in doc.get("severity_weights", {}).items():
                weights[SeverityLevel(name)] = float(weight)
            ranges = dict(DEFAULT_RANGES)
            for name, bounds in doc.get("urgency_ranges", {}).items():
                lo, hi = bounds
                ranges[UrgencyClass(name)] = (float(lo), float(hi))
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"bad config document: {exc}") from exc
        config = cls(severity_level=levels, severity_weight=weights, urgency_ranges=ranges)
        validate_config(config)
        return config


def _validate_ranges(ranges: Mapping[UrgencyClass, tuple[float, float]]) -> None:
    if set(ranges) != set(_RANGE_ORDER):
        raise ConfigError("urgency ranges must define exactly Minor, Major, Critical")
    cursor = 0.0
    for cls in _RANGE_ORDER:
        lo, hi = ranges[cls]
        if lo != cursor:
            raise ConfigError(
                f"urgency range {cls.value} starts at {lo}, expected {cursor} "
                "(ranges must cover [0, 1] exactly with no overlap)"
            )
        if hi <= lo:
            raise ConfigError(f"urgency range {cls.value} is empty or inverted")
        cursor = hi
    if cursor != 1.0:
        raise ConfigError("urgency ranges must end exactly at 1")


def validate_config(config: UrgencyConfig) -> UrgencyConfig:
    """Raise ConfigError unless weights and ranges are well-formed."""
    for level in SeverityLevel:
        weight = config.severity_weight.get(level)
        if weight is None or not 0.0 <= weight <= 1.0:
            raise ConfigError(f"severity weight for {level.value} must lie in [0, 1]")
    _validate_ranges(config.urgency_ranges)
    return config


def _usable(nodes: Iterable[AttackGraphNode]) -> list[AttackGraphNode]:
    kept = [n for n in nodes if not n.is_root]
    if not kept:
        raise EmptyNodeSetError("node set is empty (nothing to score)")
    return kept


def compute_prevalence(nodes: Iterable[AttackGraphNode], micro: MicroAIS) -> float:
    """Fraction of nodes carrying the technique."""
    total = 0
    count = 0
    wanted = micro.value
    for node in nodes:
        if node.is_root:
            continue
        total += 1
        if node.micro == wanted:
            count += 1
    if total == 0:
        raise EmptyNodeSetError("node set is empty (nothing to score)")
    return count / total


def compute_urgency(
    micro: MicroAIS, config: UrgencyConfig, nodes: Iterable[AttackGraphNode]
) -> float:
    """severity weight x normalized prevalence, in [0, 1]."""
    return config.weight_of(micro) * compute_prevalence(nodes, micro)


def classify_urgency(
    score: float, ranges: Optional[Mapping[UrgencyClass, tuple[float, float]]] = None
) -> UrgencyClass:
    """Interval membership; boundaries belong to the upper class."""
    if ranges is None:
        ranges = DEFAULT_RANGES
    _validate_ranges(ranges)
    if not 0.0 <= score <= 1.0:
        raise ValidationError(f"urgency score outside [0, 1]: {score}")
    for cls in reversed(_RANGE_ORDER):
        lo, _ = ranges[cls]
        if score >= lo:
            return cls
    return UrgencyClass.MINOR


@dataclass(frozen=True)
class MatrixCell:
    micro: MicroAIS
    macro: MacroAIS
    urgency_score: float
    urgency_class: UrgencyClass
    alert_count: int
    node_count: int
    severity_level: SeverityLevel
    severity_weight: float


@dataclass(frozen=True)
class MatrixColumn:
    macro: MacroAIS
    cells: tuple[MatrixCell, ...]


@dataclass(frozen=True)
class RecommenderMatrix:
    columns: tuple[MatrixColumn, ...]
    total_nodes: int
    total_alerts: int

    def cell(self, micro: MicroAIS) -> MatrixCell:
        for column in self.columns:
            for cell in column.cells:
                if cell.micro is micro:
                    return cell
        raise KeyError(micro)

    def cells(self) -> list[MatrixCell]:
        return [cell for column in self.columns for cell in column.cells]


def build_matrix(
    graph: GlobalAttackGraph,
    episodes: Mapping[int, Episode],
    config: UrgencyConfig,
    spec: Optional[FilterSpec] = None,
) -> RecommenderMatrix:
    """One cell per technique over the filter-restricted node set.

    Columns follow the fixed tactic order; micros are alphabetical within
    their column. Raises EmptyNodeSetError when the filter leaves nothing.
    """
    validate_config(config)
    view = filter_graph(graph, spec) if spec is not None else graph
    nodes = _usable(view.nodes.values())
    total = len(nodes)

    node_counts: dict[MicroAIS, int] = {m: 0 for m in MicroAIS}
    alert_counts: dict[MicroAIS, int] = {m: 0 for m in MicroAIS}
    for node in nodes:
        micro = MicroAIS(node.micro)
        node_counts[micro] += 1
        alert_counts[micro] += sum(
            episodes[ref].alert_count for ref in node.episode_refs if ref in episodes
        )

    columns = []
    for macro in MACRO_ORDER:
        cells = []
        for micro in micros_of(macro):
            weight = config.weight_of(micro)
            score = weight * (node_counts[micro] / total)
            if score == 0.0 and node_counts[micro] == 0:
                cls = UrgencyClass.ZERO
            else:
                cls = classify_urgency(score, config.urgency_ranges)
            cells.append(
                MatrixCell(
                    micro=micro,
                    macro=macro,
                    urgency_score=score,
                    urgency_class=cls,
                    alert_count=alert_counts[micro],
                    node_count=node_counts[micro],
                    severity_level=config.level_of(micro),
                    severity_weight=weight,
                )
            )
        columns.append(MatrixColumn(macro=macro, cells=tuple(cells)))
    return RecommenderMatrix(
        columns=tuple(columns),
        total_nodes=total,
        total_alerts=sum(alert_counts.values()),
    )


def zero_matrix(config: UrgencyConfig) -> RecommenderMatrix:
    """All-Zero cells; what an emptied node set renders as."""
    validate_config(config)
    columns = []
    for macro in MACRO_ORDER:
        cells = tuple(
            MatrixCell(
                micro=micro,
                macro=macro,
                urgency_score=0.0,
                urgency_class=UrgencyClass.ZERO,
                alert_count=0,
                node_count=0,
                severity_level=config.level_of(micro),
                severity_weight=config.weight_of(micro),
            )
            for micro in micros_of(macro)
        )
        columns.append(MatrixColumn(macro=macro, cells=cells))
    return RecommenderMatrix(columns=tuple(columns), total_nodes=0, total_alerts=0)


def matrix_document(matrix: RecommenderMatrix) -> dict:
    """Stable dictionary form for API responses and exports."""
    return {
        "total_nodes": matrix.total_nodes,
        "total_alerts": matrix.total_alerts,
        "columns": [
            {
                "macro": column.macro.value,
                "cells": [
                    {
                        "micro": cell.micro.value,
                        "macro": cell.macro.value,
                        "urgency_score": cell.urgency_score,
                        "urgency_class": cell.urgency_class.value,
                        "alert_count": cell.alert_count,
                        "node_count": cell.node_count,
                        "severity_level": cell.severity_level.value,
                        "severity_weight": cell.severity_weight,
                    }
                    for cell in column.cells
                ],
            }
            for column in matrix.columns
        ],
    }


def ranked_cells(matrix: RecommenderMatrix) -> list[MatrixCell]:
    """Cells by descending score; ties break on the technique name."""
    return sorted(matrix.cells(), key=lambda c: (-c.urgency_score, c.micro.value))
