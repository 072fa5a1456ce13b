from fractions import Fraction

import pytest

from planminer.errors import GeneratorSpecError
from planminer.log import log_stats, serialize_event_log
from planminer.miner import mine_tree
from planminer.synthlog import (SyntheticLogSpec, activity_labels,
                                generate_synthetic_log, generating_tree,
                                parse_duration_ranges)
from planminer.tree import shape


def test_hundred_case_log_has_exact_variant_counts(log100):
    stats = log_stats(log100)
    assert stats.cases == 100
    assert stats.variants == {
        ("a", "b", "c", "e"): 45,
        ("a", "c", "b", "e"): 53,
        ("a", "d", "e"): 2,
    }


def test_mining_the_synthetic_log_recovers_the_generator(log100):
    tree = mine_tree(log100)
    assert shape(tree) == ("seq", "a", ("xor", ("and", "b", "c"), "d"), "e")
    assert tree.freq == 100
    assert [c.freq for c in tree.children[1].children] == [98, 2]


def test_same_seed_is_byte_identical(log100):
    spec = SyntheticLogSpec(activity_count=5, parallel_width=2,
                            variant_weights=(45, 53, 2), seed=7,
                            duration_ranges={"a": (2.0, 2.0), "b": (4.0, 4.0),
                                             "c": (3.5, 3.5), "d": (1.5, 1.5),
                                             "e": (5.0, 5.0)})
    again = generate_synthetic_log(spec)
    assert serialize_event_log(again) == serialize_event_log(log100)


def test_different_seed_changes_only_the_dressing(log100):
    spec = SyntheticLogSpec(activity_count=5, parallel_width=2,
                            variant_weights=(45, 53, 2), seed=8)
    other = generate_synthetic_log(spec)
    assert log_stats(other).variants == log_stats(log100).variants
    assert serialize_event_log(other) != serialize_event_log(log100)


def test_generating_tree_shapes():
    wide = generating_tree(SyntheticLogSpec(6, 3, (1, 1), 0))
    assert shape(wide) == ("seq", "a", ("xor", ("and", "b", "c", "d"), "e"), "f")
    serial = generating_tree(SyntheticLogSpec(3, 1, (1,), 0))
    assert shape(serial) == ("seq", "a", "b", "c")


def test_generator_settings_validation():
    with pytest.raises(GeneratorSpecError):
        generating_tree(SyntheticLogSpec(4, 2, (1, 1, 1), 0))   # no room for a tail
    with pytest.raises(GeneratorSpecError):
        generating_tree(SyntheticLogSpec(0, 1, (1,), 0))
    with pytest.raises(GeneratorSpecError):
        generate_synthetic_log(SyntheticLogSpec(5, 2, (1, 1), 0))       # one weight short
    with pytest.raises(GeneratorSpecError):
        generate_synthetic_log(SyntheticLogSpec(5, 2, (0, 0, 0), 0))
    with pytest.raises(GeneratorSpecError):
        generate_synthetic_log(SyntheticLogSpec(5, 2, (1, 1, -1), 0))


def test_durations_stay_on_the_quarter_hour_grid():
    spec = SyntheticLogSpec(5, 2, (3, 3, 3), seed=1,
                            duration_ranges={"a": (1.0, 4.0)})
    log = generate_synthetic_log(spec)
    for trace in log:
        for event in trace.events:
            assert event.duration % Fraction(1, 4) == 0
            if event.activity == "a":
                assert 1 <= event.duration <= 4


def test_activity_labels_scale_past_the_alphabet():
    assert activity_labels(3) == ["a", "b", "c"]
    many = activity_labels(30)
    assert len(many) == 30 and many[0] == "a01" and many[-1] == "a30"


def test_parse_duration_ranges():
    assert parse_duration_ranges("a=2,b=1:4") == {"a": (2.0, 2.0), "b": (1.0, 4.0)}
    assert parse_duration_ranges("") == {}
    with pytest.raises(GeneratorSpecError):
        parse_duration_ranges("a=")
    with pytest.raises(GeneratorSpecError):
        parse_duration_ranges("a=x")
