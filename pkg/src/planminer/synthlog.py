"""Deterministic synthetic event logs for demos and benchmarks.

The generator builds a canonical project tree from two numbers — total
activity count and the width of one parallel block — and emits a log whose
variant multiplicities are given exactly by ``variant_weights``:

* width >= 2: ``first`` activity, then an exclusive choice between the
  parallel block of the next ``width`` activities and a single alternative
  activity, then the remaining activities as a tail sequence;
* width == 1: a plain sequence of all activities (a single variant).

Weights are matched one-to-one against the tree's variants in
lexicographic order.  The seed drives durations, timestamps and the
shuffling of projects — never the variant counts, so repeated runs with
one seed are byte-identical.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import GeneratorSpecError
from .log import EventLog, EventRecord, Trace
from .tree import ProjectTree, enumerate_language, leaf, par, seq, xor

DEFAULT_RANGE = (1.0, 5.0)


@dataclass(frozen=True)
class SyntheticLogSpec:
    activity_count: int
    parallel_width: int
    variant_weights: tuple[int, ...]
    seed: int
    duration_ranges: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    start: datetime = datetime(2024, 1, 1, 8, 0)


def activity_labels(count: int) -> list[str]:
    if count <= len(string.ascii_lowercase):
        return list(string.ascii_lowercase[:count])
    return [f"a{i:02d}" for i in range(1, count + 1)]


def generating_tree(spec: SyntheticLogSpec) -> ProjectTree:
    """The tree the generator settings describe (frequencies left at zero)."""
    n, width = spec.activity_count, spec.parallel_width
    if n <= 0:
        raise GeneratorSpecError("activity count must be positive")
    if width < 1:
        raise GeneratorSpecError("parallel width must be at least 1")
    labels = activity_labels(n)
    if width == 1:
        return seq(*[leaf(a) for a in labels]) if n > 1 else leaf(labels[0])
    if n < width + 3:
        raise GeneratorSpecError(
            f"{n} activities cannot host a width-{width} block "
            f"(need first + block + alternative + tail)")
    first, block = labels[0], labels[1:width + 1]
    alternative, tail = labels[width + 1], labels[width + 2:]
    choice = xor(par(*[leaf(a) for a in block]), leaf(alternative))
    return seq(leaf(first), choice, *[leaf(a) for a in tail])


def generate_synthetic_log(spec: SyntheticLogSpec) -> EventLog:
    """Emit a log realising the generating tree with exact variant counts."""
    tree = generating_tree(spec)
    variants = sorted(enumerate_language(tree, max_len=spec.activity_count))
    weights = tuple(spec.variant_weights)
    if any(w < 0 for w in weights) or not any(weights):
        raise GeneratorSpecError("variant weights must be non-negative and not all zero")
    if len(weights) != len(variants):
        raise GeneratorSpecError(
            f"expected {len(variants)} variant weights (one per variant), got {len(weights)}")

    rng = random.Random(spec.seed)
    planned: list[tuple[str, ...]] = []
    for variant, weight in zip(variants, weights):
        planned.extend([variant] * weight)
    rng.shuffle(planned)

    width = len(str(len(planned)))
    traces = []
    for case_no, variant in enumerate(planned, start=1):
        project = f"p{case_no:0{width}d}"
        moment = spec.start + timedelta(days=case_no - 1, minutes=rng.randint(0, 120))
        events = []
        for event_no, activity in enumerate(variant, start=1):
            duration = _sample_duration(spec, activity, rng)
            events.append(EventRecord(project, f"e{event_no}", activity, moment, duration))
            gap = timedelta(minutes=rng.randint(10, 180))
            moment += timedelta(hours=float(duration)) + gap
        traces.append(Trace(project, tuple(events)))
    return EventLog(tuple(traces))


def _sample_duration(spec: SyntheticLogSpec, activity: str, rng: random.Random) -> Fraction:
    low, high = spec.duration_ranges.get(activity, DEFAULT_RANGE)
    if low > high or low < 0:
        raise GeneratorSpecError(f"bad duration range for {activity!r}: {(low, high)}")
    quarters_low, quarters_high = round(low * 4), round(high * 4)
    return Fraction(rng.randint(quarters_low, quarters_high), 4)


def parse_duration_ranges(text: str) -> dict[str, tuple[float, float]]:
    """Parse ``a=2,b=1:4`` style range lists (a single number pins a value)."""
    ranges: dict[str, tuple[float, float]] = {}
    if not text:
        return ranges
    for item in text.split(","):
        name, _, value = item.partition("=")
        if not name or not value:
            raise GeneratorSpecError(f"bad duration range {item!r}")
        low, sep, high = value.partition(":")
        try:
            ranges[name.strip()] = (float(low), float(high) if sep else float(low))
        except ValueError as exc:
            raise GeneratorSpecError(f"bad duration range {item!r}") from exc
    return ranges
