from datetime import datetime
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planminer.errors import LogParseError, ModelError
from planminer.log import (EventLog, EventRecord, Trace, format_duration,
                           log_from_traces, log_stats, parse_duration,
                           parse_event_log, parse_timestamp, serialize_event_log,
                           stats_to_dict)


def test_golden_log_variants(table1):
    assert len(table1) == 4
    assert table1.alphabet == frozenset("abcde")
    assert table1.variants == {
        ("a", "b", "c", "e"): 1,
        ("a", "c", "b", "e"): 1,
        ("a", "d", "e"): 2,
    }


def test_golden_log_features_and_durations(table1):
    first = table1.traces[0]
    assert first.events[0].features == {"client": "CO"}
    assert first.events[0].duration == Fraction(2)
    # 4:30 must be four and a half hours, not 4.3
    by_activity = {e.activity: e.duration for t in table1 for e in t.events
                   if t.project_id == "4"}
    assert by_activity["e"] == Fraction(9, 2)


def test_parse_duration_forms():
    assert parse_duration("3:30") == Fraction(7, 2)
    assert parse_duration("0:45") == Fraction(3, 4)
    assert parse_duration("2") == 2
    assert parse_duration("4.5") == Fraction(9, 2)
    assert parse_duration("7/3") == Fraction(7, 3)
    for bad in ("3:5", "3:99", "1:2:3", "x"):
        with pytest.raises(ValueError):
            parse_duration(bad)


@given(st.fractions(min_value=0, max_value=1000))
def test_duration_round_trip(value):
    assert parse_duration(format_duration(value)) == value


def test_parse_timestamp_offsets():
    assert parse_timestamp("2022-01-13T12:00:00") == datetime(2022, 1, 13, 12)
    assert parse_timestamp("2022-01-13T12:00:00Z") == datetime(2022, 1, 13, 12)
    assert parse_timestamp("2022-01-13T14:00:00+02:00") == datetime(2022, 1, 13, 12)


def test_events_sorted_by_timestamp():
    csv_text = (
        "project_id,activity,timestamp,duration\n"
        "p,second,2024-01-01T12:00:00,1\n"
        "p,first,2024-01-01T09:00:00,1\n"
    )
    log = parse_event_log(csv_text)
    assert log.traces[0].activities() == ("first", "second")


def test_parse_problems_are_aggregated_with_rows():
    csv_text = (
        "project_id,activity,timestamp,duration\n"
        "p,a,2024-01-01T09:00:00,1\n"
        ",a,2024-01-01T09:00:00,1\n"
        "p,a,not-a-date,1\n"
        "p,a,2024-01-01T09:00:00,nope\n"
    )
    with pytest.raises(LogParseError) as err:
        parse_event_log(csv_text)
    rows = [row for row, _ in err.value.problems]
    assert rows == [3, 4, 5]
    messages = " ".join(msg for _, msg in err.value.problems)
    assert "project_id" in messages and "timestamp" in messages and "duration" in messages


def test_missing_columns_rejected():
    with pytest.raises(LogParseError):
        parse_event_log("project_id,activity\np,a\n")
    with pytest.raises(LogParseError):
        parse_event_log("")


def test_reserved_labels_rejected():
    csv_text = "project_id,activity,timestamp,duration\np,τ,2024-01-01T09:00:00,1\n"
    with pytest.raises(LogParseError):
        parse_event_log(csv_text)


def test_negative_duration_rejected():
    csv_text = "project_id,activity,timestamp,duration\np,a,2024-01-01T09:00:00,-1\n"
    with pytest.raises(LogParseError):
        parse_event_log(csv_text)


def test_feature_typing_numeric_iff_all_numeric():
    csv_text = (
        "project_id,activity,timestamp,duration,size,grade\n"
        "p,a,2024-01-01T09:00:00,1,12,A\n"
        "q,a,2024-01-01T09:00:00,1,3.5,7\n"
    )
    log = parse_event_log(csv_text)
    features = [t.events[0].features for t in log]
    assert features[0] == {"size": 12.0, "grade": "A"}
    assert features[1] == {"size": 3.5, "grade": "7"}


def test_impute_missing_durations_uses_activity_mean():
    csv_text = (
        "project_id,activity,timestamp,duration\n"
        "p,a,2024-01-01T09:00:00,2\n"
        "q,a,2024-01-01T09:00:00,3\n"
        "r,a,2024-01-01T09:00:00,\n"
    )
    with pytest.raises(LogParseError):
        parse_event_log(csv_text)
    log = parse_event_log(csv_text, impute_missing_durations=True)
    assert log.traces[2].events[0].duration == Fraction(5, 2)


def test_impute_fails_without_any_observation():
    csv_text = "project_id,activity,timestamp,duration\np,a,2024-01-01T09:00:00,\n"
    with pytest.raises(LogParseError):
        parse_event_log(csv_text, impute_missing_durations=True)


def test_serialize_round_trip(table1):
    assert parse_event_log(serialize_event_log(table1)) == table1


def test_trace_requires_ordered_timestamps():
    early = EventRecord("p", "e1", "a", datetime(2024, 1, 2), Fraction(1), {})
    late = EventRecord("p", "e2", "b", datetime(2024, 1, 1), Fraction(1), {})
    with pytest.raises(ModelError):
        Trace("p", (early, late))


def test_log_rejects_reserved_alphabet():
    record = EventRecord("p", "e1", "▶", datetime(2024, 1, 1), Fraction(0), {})
    with pytest.raises(ModelError):
        EventLog((Trace("p", (record,)),))


def test_stats_ordering(table1):
    data = stats_to_dict(log_stats(table1))
    assert data["cases"] == 4
    assert data["variants"][0] == {"activities": ["a", "d", "e"], "count": 2}
    assert [v["count"] for v in data["variants"]] == [2, 1, 1]


def test_log_from_traces_helper():
    log = log_from_traces([("a", "b"), ("a",)])
    assert log.variants == {("a", "b"): 1, ("a",): 1}
    assert log.traces[0].project_id != log.traces[1].project_id
