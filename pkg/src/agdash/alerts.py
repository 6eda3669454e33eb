"""Alert file parsing and normalization.

Accepts Suricata-style alert records, either newline-delimited or as one
top-level JSON array, and normalizes each record to a fixed schema with a
resolved attack stage, severity, and targeted service. Splunk-export
wrappers ({"result": {"_raw": ...}}) are unwrapped; records with a non-alert
event_type are ignored. Parsing is pure and deterministic: identical bytes
yield identical alert lists.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

from .errors import FormatError, RecordError, ValidationError
from .mappings import AISMapping, DEFAULT_MAPPING, DEFAULT_PORT_TABLE, PortServiceTable
from .stages import MacroAIS, MicroAIS, SeverityLevel, macro_of


class ParsePolicy(str, Enum):
    SKIP = "skip"      # count bad records, keep going
    STRICT = "strict"  # first bad record aborts with its line number


@dataclass(frozen=True)
class NormalizedAlert:
    timestamp: datetime  # UTC, microsecond resolution
    src_ip: str
    dst_ip: str
    dst_port: int
    signature: str
    signature_id: int
    category: str
    micro: MicroAIS
    macro: MacroAIS
    severity: SeverityLevel
    service: str


_OFFSET_NO_COLON = re.compile(r"([+-]\d{2})(\d{2})$")


def parse_timestamp(value: Any) -> datetime:
    """RFC3339 to an aware UTC datetime; a missing offset means UTC."""
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"timestamp missing or not a string: {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    text = _OFFSET_NO_COLON.sub(r"\1:\2", text)
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def map_signature_to_ais(
    signature: str,
    signature_id: int,
    category: str,
    mapping: AISMapping = DEFAULT_MAPPING,
) -> tuple[MicroAIS, MacroAIS, SeverityLevel]:
    """First matching rule wins; the fallback keeps the mapping total."""
    for rule in mapping.rules:
        if rule.matches(signature, signature_id, category):
            return rule.micro, macro_of(rule.micro), rule.severity
    fallback = mapping.fallback_micro
    return fallback, macro_of(fallback), mapping.fallback_severity


def resolve_service(dst_port: int, table: PortServiceTable = DEFAULT_PORT_TABLE) -> str:
    """Registry name for a port, "port-<n>" when unregistered."""
    if not isinstance(dst_port, int) or isinstance(dst_port, bool) or not 0 <= dst_port <= 65535:
        raise ValidationError(f"destination port out of range: {dst_port!r}")
    return table.name(dst_port)


def _unwrap(record: dict) -> Optional[dict]:
    """Peel Splunk export wrappers; None when the payload is not an object."""
    if "result" in record and isinstance(record["result"], dict) and "_raw" in record["result"]:
        record = json.loads(record["result"]["_raw"])
    elif "_raw" in record:
        record = json.loads(record["_raw"])
    return record if isinstance(record, dict) else None


def _normalize_record(
    record: dict,
    mapping: AISMapping,
    ports: PortServiceTable,
) -> Optional[NormalizedAlert]:
    """One record to a NormalizedAlert; None for non-alert event types."""
    record = _unwrap(record)
    if record is None:
        raise ValueError("record is not an object")
    if record.get("event_type") not in (None, "alert"):
        return None

    timestamp = parse_timestamp(record.get("timestamp"))
    try:
        src_ip = str(record["src_ip"])
        dst_ip = str(record["dest_ip"])
        dst_port = int(record["dest_port"])
        alert = record["alert"]
        signature = str(alert["signature"])
        signature_id = int(alert["signature_id"])
        category = str(alert["category"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"missing or malformed field: {exc}") from exc

    service = resolve_service(dst_port, ports)
    micro, macro, severity = map_signature_to_ais(signature, signature_id, category, mapping)
    return NormalizedAlert(
        timestamp=timestamp,
        src_ip=src_ip,
        dst_ip=dst_ip,
        dst_port=dst_port,
        signature=signature,
        signature_id=signature_id,
        category=category,
        micro=micro,
        macro=macro,
        severity=severity,
        service=service,
    )


def _iter_records(text: str) -> list[tuple[int, Any, Optional[str]]]:
    """(line_number, record_or_None, error) triples from either encoding."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise FormatError(f"unreadable alert array: {exc}") from exc
        if not isinstance(doc, list):
            raise FormatError("top-level JSON value is not an array")
        return [(i + 1, rec, None) for i, rec in enumerate(doc)]

    out: list[tuple[int, Any, Optional[str]]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append((line_no, json.loads(line), None))
        except json.JSONDecodeError as exc:
            out.append((line_no, None, str(exc)))
    if out and all(err is not None for _, _, err in out):
        raise FormatError("no line of the input parses as JSON")
    return out


def parse_alert_file(
    raw_bytes: bytes,
    policy: ParsePolicy = ParsePolicy.SKIP,
    mapping: AISMapping = DEFAULT_MAPPING,
    ports: PortServiceTable = DEFAULT_PORT_TABLE,
) -> tuple[list[NormalizedAlert], int]:
    """Parse an uploaded alert file.

    Returns the alerts in non-decreasing timestamp order (stable, so ties
    keep input order) plus the count of records that failed to parse. Under
    STRICT the first bad record raises RecordError with its line number;
    wholly unreadable input raises FormatError either way.
    """
    try:
        text = raw_bytes.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"input is not UTF-8 text: {exc}") from exc
    if not text.strip():
        return [], 0

    alerts: list[NormalizedAlert] = []
    skipped = 0
    for line_no, record, err in _iter_records(text):
        if err is None:
            try:
                alert = _normalize_record(record, mapping, ports)
            except (ValueError, ValidationError, json.JSONDecodeError) as exc:
                err = str(exc)
            else:
                if alert is not None:
                    alerts.append(alert)
                continue
        if policy is ParsePolicy.STRICT:
            raise RecordError(err, line=line_no)
        skipped += 1

    alerts.sort(key=lambda a: a.timestamp)  # list.sort is stable
    return alerts, skipped
