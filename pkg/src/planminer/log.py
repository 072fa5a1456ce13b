"""Project event logs.

An event log is a multiset of traces, one trace per project (case).  Each
event records which activity ran, when it started and how long it took.
Durations are kept as exact rationals (hours) so every downstream figure –
duration estimates, schedules, makespans – stays exact.

CSV interface: UTF-8 with a header row, mandatory columns ``project_id``,
``activity``, ``timestamp`` (RFC 3339) and ``duration``, optional
``event_id``.  Any other column is treated as a case feature.  Durations
accept ``H:MM`` (``3:30`` is 3.5 hours) or a plain number of hours.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import LogParseError, ModelError

# Reserved labels: silent steps and the dummy graph endpoints.
TAU = "τ"      # τ
START = "▶"    # ▶
END = "■"      # ■
RESERVED_LABELS = frozenset({TAU, START, END})

MANDATORY_COLUMNS = ("project_id", "activity", "timestamp", "duration")


@dataclass(frozen=True)
class EventRecord:
    """One executed activity instance inside a project."""

    project_id: str
    event_id: str
    activity: str
    timestamp: datetime
    duration: Fraction  # hours, non-negative
    features: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Trace:
    """The time-ordered events of a single project."""

    project_id: str
    events: tuple[EventRecord, ...]

    def __post_init__(self):
        stamps = [e.timestamp for e in self.events]
        if any(b < a for a, b in zip(stamps, stamps[1:])):
            raise ModelError(f"trace {self.project_id!r}: timestamps are not non-decreasing")

    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class EventLog:
    """A multiset of traces plus the activity alphabet they range over."""

    traces: tuple[Trace, ...]
    alphabet: frozenset[str] = field(default=frozenset())
    variants: Mapping[tuple[str, ...], int] = field(default_factory=dict, compare=True)

    def __post_init__(self):
        seen = set()
        for trace in self.traces:
            seen.update(trace.activities())
        bad = seen & RESERVED_LABELS
        if bad:
            raise ModelError(f"reserved labels used as activities: {sorted(bad)}")
        if not self.alphabet:
            object.__setattr__(self, "alphabet", frozenset(seen))
        elif not seen <= self.alphabet:
            raise ModelError("alphabet does not cover all trace activities")
        counts: dict[tuple[str, ...], int] = {}
        for trace in self.traces:
            key = trace.activities()
            counts[key] = counts.get(key, 0) + 1
        object.__setattr__(self, "variants", counts)

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)


@dataclass(frozen=True)
class LogStats:
    """Variant multiplicities of a log."""

    variants: Mapping[tuple[str, ...], int]
    cases: int


def parse_duration(text: str) -> Fraction:
    """Parse ``H:MM`` or a plain (possibly fractional) number of hours."""
    text = text.strip()
    if ":" in text:
        hours, _, minutes = text.partition(":")
        if not minutes.isdigit() or len(minutes) != 2 or int(minutes) >= 60:
            raise ValueError(f"bad H:MM duration {text!r}")
        return Fraction(int(hours)) + Fraction(int(minutes), 60)
    return Fraction(text)


def format_duration(value: Fraction) -> str:
    """Inverse of :func:`parse_duration`; prefers ``H:MM`` when exact."""
    minutes = value * 60
    if minutes.denominator == 1 and value >= 0:
        return f"{int(value)}:{int(minutes) % 60:02d}"
    return str(value)


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 timestamp; aware values are normalised to naive UTC."""
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    stamp = datetime.fromisoformat(text)
    if stamp.tzinfo is not None:
        stamp = stamp.astimezone(timezone.utc).replace(tzinfo=None)
    return stamp


def parse_event_log(text: str, *, impute_missing_durations: bool = False) -> EventLog:
    """Parse CSV text into an :class:`EventLog`.

    Events are grouped per ``project_id`` and ordered by timestamp, with ties
    broken by ``event_id`` and then input order.  Extra columns become case
    features; a feature column is numeric iff every non-empty cell parses as
    a number, otherwise it stays categorical.

    Raises :class:`LogParseError` with row-level diagnostics on malformed
    input.  With ``impute_missing_durations`` an empty duration cell is
    filled with the mean duration observed for the same activity.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise LogParseError("empty input: no header row")
    header = [name.strip() for name in reader.fieldnames]
    missing = [col for col in MANDATORY_COLUMNS if col not in header]
    if missing:
        raise LogParseError(f"missing mandatory columns: {', '.join(missing)}")
    feature_columns = [c for c in header if c not in MANDATORY_COLUMNS and c != "event_id"]

    rows: list[tuple[int, dict]] = []
    problems: list[tuple[int, str]] = []
    for row in reader:
        rows.append((reader.line_num, {(k or "").strip(): (v or "") for k, v in row.items() if k}))

    numeric: dict[str, bool] = {}
    for col in feature_columns:
        cells = [r[col].strip() for _, r in rows if r.get(col, "").strip()]
        numeric[col] = bool(cells) and all(_is_number(c) for c in cells)

    parsed: list[tuple[int, int, EventRecord, bool]] = []  # (line, order, record, dur_missing)
    for order, (line, row) in enumerate(rows):
        project = row.get("project_id", "").strip()
        activity = row.get("activity", "").strip()
        event_id = row.get("event_id", "").strip()
        if not project:
            problems.append((line, "missing project_id"))
            continue
        if not activity:
            problems.append((line, "missing activity"))
            continue
        if activity in RESERVED_LABELS:
            problems.append((line, f"activity uses reserved label {activity!r}"))
            continue
        try:
            stamp = parse_timestamp(row.get("timestamp", ""))
        except ValueError:
            problems.append((line, f"unparseable timestamp {row.get('timestamp', '')!r}"))
            continue
        raw_duration = row.get("duration", "").strip()
        duration = Fraction(0)
        missing_duration = not raw_duration
        if missing_duration and not impute_missing_durations:
            problems.append((line, "missing duration"))
            continue
        if raw_duration:
            try:
                duration = parse_duration(raw_duration)
            except (ValueError, ZeroDivisionError):
                problems.append((line, f"unparseable duration {raw_duration!r}"))
                continue
            if duration < 0:
                problems.append((line, f"negative duration {raw_duration!r}"))
                continue
        features: dict[str, object] = {}
        for col in feature_columns:
            cell = row.get(col, "").strip()
            if not cell:
                continue
            features[col] = float(cell) if numeric[col] else cell
        record = EventRecord(project, event_id, activity, stamp, duration, features)
        parsed.append((line, order, record, missing_duration))

    if problems:
        raise LogParseError(problems)

    if impute_missing_durations:
        parsed = _impute_durations(parsed)

    by_project: dict[str, list[tuple[datetime, str, int, EventRecord]]] = {}
    project_order: list[str] = []
    for _line, order, record, _miss in parsed:
        if record.project_id not in by_project:
            by_project[record.project_id] = []
            project_order.append(record.project_id)
        by_project[record.project_id].append((record.timestamp, record.event_id, order, record))

    traces = []
    for project in project_order:
        events = tuple(rec for *_key, rec in sorted(by_project[project], key=lambda t: t[:3]))
        traces.append(Trace(project, events))
    return EventLog(tuple(traces))


def _impute_durations(parsed):
    sums: dict[str, Fraction] = {}
    counts: dict[str, int] = {}
    for _line, _order, record, missing in parsed:
        if not missing:
            sums[record.activity] = sums.get(record.activity, Fraction(0)) + record.duration
            counts[record.activity] = counts.get(record.activity, 0) + 1
    out = []
    problems = []
    for line, order, record, missing in parsed:
        if missing:
            if record.activity not in counts:
                problems.append((line, f"no observed duration for activity {record.activity!r}"))
                continue
            mean = sums[record.activity] / counts[record.activity]
            record = EventRecord(record.project_id, record.event_id, record.activity,
                                 record.timestamp, mean, record.features)
        out.append((line, order, record, False))
    if problems:
        raise LogParseError(problems)
    return out


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def serialize_event_log(log: EventLog) -> str:
    """Serialize a log back to CSV; ``parse_event_log`` round-trips it."""
    feature_names = sorted({name for trace in log for e in trace.events for name in e.features})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(MANDATORY_COLUMNS[:1]) + ["event_id"] + list(MANDATORY_COLUMNS[1:]) + feature_names)
    for trace in log:
        for event in trace.events:
            row = [event.project_id, event.event_id, event.activity,
                   event.timestamp.isoformat(), format_duration(event.duration)]
            for name in feature_names:
                value = event.features.get(name, "")
                if isinstance(value, float) and value == int(value):
                    value = int(value)
                row.append(str(value) if value != "" else "")
            writer.writerow(row)
    return buffer.getvalue()


def log_stats(log: EventLog) -> LogStats:
    """Variant counts of a log (a variant is an activity sequence)."""
    return LogStats(dict(log.variants), len(log.traces))


def stats_to_dict(stats: LogStats) -> dict:
    ordered = sorted(stats.variants.items(), key=lambda kv: (-kv[1], kv[0]))
    return {
        "cases": stats.cases,
        "variants": [{"activities": list(v), "count": n} for v, n in ordered],
    }


def log_to_dict(log: EventLog) -> dict:
    return {
        "alphabet": sorted(log.alphabet),
        "cases": len(log.traces),
        "traces": [
            {
                "project_id": trace.project_id,
                "events": [
                    {
                        "event_id": e.event_id,
                        "activity": e.activity,
                        "timestamp": e.timestamp.isoformat(),
                        "duration": format_duration(e.duration),
                        "features": dict(sorted(e.features.items())),
                    }
                    for e in trace.events
                ],
            }
            for trace in log.traces
        ],
    }


def log_to_json(log: EventLog) -> str:
    return json.dumps(log_to_dict(log), ensure_ascii=False, indent=2)


def stats_to_json(stats: LogStats) -> str:
    return json.dumps(stats_to_dict(stats), ensure_ascii=False, indent=2)


def log_from_traces(traces: Iterable[Sequence[str] | Trace], *, project_prefix: str = "c") -> EventLog:
    """Build a log from bare activity sequences (handy for tests and demos).

    Sequences get synthetic project ids, zero durations and a shared epoch
    timestamp; existing :class:`Trace` objects are taken as-is.
    """
    epoch = datetime(2000, 1, 1)
    out: list[Trace] = []
    for i, item in enumerate(traces, start=1):
        if isinstance(item, Trace):
            out.append(item)
            continue
        project = f"{project_prefix}{i}"
        events = tuple(
            EventRecord(project, f"e{j}", activity, epoch, Fraction(0))
            for j, activity in enumerate(item, start=1)
        )
        out.append(Trace(project, events))
    return EventLog(tuple(out))
