"""Turn mined project trees into critical-path schedules.

A *variant choice* resolves every exclusive choice of a tree (and fixes a
redo count per loop, default zero).  Decoding a choice yields an
activity-on-node precedence DAG: sequences chain blocks, parallel blocks
run side by side, silent steps vanish.  The critical path method then
gives earliest/latest start/finish times, slack per activity and the
makespan — all in exact rational arithmetic, using per-activity duration
estimates taken from the log.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import ChoiceError, ScheduleError
from .log import EventLog, Trace
from .tree import AND, LOOP, XOR, Path, ProjectTree, indexed_nodes, subtree_at

START_NODE = "_start"
END_NODE = "_end"


@dataclass(frozen=True)
class VariantChoice:
    selections: Mapping[str, int] = field(default_factory=dict)  # xor id -> child index
    unrolls: Mapping[str, int] = field(default_factory=dict)     # loop id -> redo count


@dataclass(frozen=True)
class PlanActivity:
    id: str
    label: str


@dataclass(frozen=True)
class VariantPlan:
    """Activity-on-node precedence DAG with dummy start/end nodes."""

    activities: tuple[PlanActivity, ...]
    arcs: frozenset[tuple[str, str]]
    start: str = START_NODE
    end: str = END_NODE

    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.activities)

    def predecessors(self) -> dict[str, set[str]]:
        preds: dict[str, set[str]] = {a.id: set() for a in self.activities}
        preds[self.start] = set()
        preds[self.end] = set()
        for src, dst in self.arcs:
            preds[dst].add(src)
        return preds

    def successors(self) -> dict[str, set[str]]:
        succs: dict[str, set[str]] = {a.id: set() for a in self.activities}
        succs[self.start] = set()
        succs[self.end] = set()
        for src, dst in self.arcs:
            succs[src].add(dst)
        return succs


@dataclass(frozen=True)
class DurationModel:
    kind: str
    durations: Mapping[str, Fraction]

    def get(self, label: str) -> Fraction:
        if label not in self.durations:
            raise ScheduleError(f"no duration estimate for activity {label!r}")
        return self.durations[label]


@dataclass(frozen=True)
class ScheduleEntry:
    label: str
    duration: Fraction
    early_start: Fraction
    early_finish: Fraction
    late_start: Fraction
    late_finish: Fraction

    @property
    def slack(self) -> Fraction:
        return self.late_start - self.early_start


@dataclass(frozen=True)
class Schedule:
    entries: Mapping[str, ScheduleEntry]  # keyed by activity instance id
    makespan: Fraction
    critical_path: tuple[str, ...]        # activity labels, start to end


@dataclass(frozen=True)
class RelaxationReport:
    baseline_makespan: Fraction
    plan_makespan: Fraction
    gain: Fraction
    percent_gain: Fraction
    slack: Mapping[str, Fraction]


# ---------------------------------------------------------------------------
# variants

def enumerate_variants(tree: ProjectTree, limit: int | None = None) -> list[VariantChoice]:
    """All combinations of exclusive-choice selections, loops at zero redos.

    Ordered by descending product of the selected branches' case
    frequencies, ties broken by the selection vector itself.
    """
    ids = indexed_nodes(tree)
    xor_ids = sorted((nid for nid in ids if nid.startswith(XOR)),
                     key=lambda nid: int(nid[len(XOR):]))
    if not xor_ids:
        return [VariantChoice()]
    spaces = []
    for nid in xor_ids:
        node = subtree_at(tree, ids[nid])
        spaces.append([(i, child.freq) for i, child in enumerate(node.children)])
    variants = []
    for combo in product(*spaces):
        weight = 1
        selections = {}
        for nid, (index, freq) in zip(xor_ids, combo):
            selections[nid] = index
            weight *= freq
        variants.append((weight, tuple(sorted(selections.items())), VariantChoice(selections)))
    variants.sort(key=lambda item: (-item[0], item[1]))
    chosen = [v for _w, _k, v in variants]
    return chosen[:limit] if limit is not None else chosen


def variant_weight(tree: ProjectTree, choice: VariantChoice) -> int:
    ids = indexed_nodes(tree)
    weight = 1
    for nid, index in choice.selections.items():
        node = subtree_at(tree, ids[nid])
        weight *= node.children[index].freq
    return weight


# ---------------------------------------------------------------------------
# decoding

class _Block:
    """A sub-DAG under construction: entry and exit activity id sets."""

    __slots__ = ("entries", "exits", "empty")

    def __init__(self, entries: set[str], exits: set[str], empty: bool):
        self.entries = entries
        self.exits = exits
        self.empty = empty


def decode_variant(tree: ProjectTree, choice: VariantChoice) -> VariantPlan:
    """Resolve a choice into an activity-on-node precedence DAG.

    Every exclusive choice of the tree must be selected; unknown ids are
    rejected.  Loop bodies are repeated ``unrolls`` times with the
    highest-frequency redo part in between (leftmost on ties).
    """
    ids = indexed_nodes(tree)
    for nid in set(choice.selections) | set(choice.unrolls):
        if nid not in ids:
            raise ChoiceError(f"choice addresses unknown node {nid!r}")
    xor_nodes = {nid for nid in ids if nid.startswith(XOR)}
    missing = sorted(xor_nodes - set(choice.selections))
    if missing:
        raise ChoiceError(f"no selection for exclusive choice(s): {', '.join(missing)}")
    for nid, index in choice.selections.items():
        node = subtree_at(tree, ids[nid])
        if node.op != XOR:
            raise ChoiceError(f"{nid} selects a non-choice node")
        if not 0 <= index < len(node.children):
            raise ChoiceError(f"{nid} has no branch {index}")
    for nid, count in choice.unrolls.items():
        if subtree_at(tree, ids[nid]).op != LOOP:
            raise ChoiceError(f"{nid} unrolls a non-loop node")
        if count < 0:
            raise ChoiceError(f"negative unroll for {nid}")

    id_by_path = {path: nid for nid, path in ids.items()}
    activities: list[PlanActivity] = []
    arcs: set[tuple[str, str]] = set()
    label_counts: dict[str, int] = {}

    def fresh(label: str) -> str:
        label_counts[label] = label_counts.get(label, 0) + 1
        n = label_counts[label]
        instance = label if n == 1 else f"{label}#{n}"
        activities.append(PlanActivity(instance, label))
        return instance

    def connect(block_a: _Block, block_b: _Block) -> None:
        for a in block_a.exits:
            for b in block_b.entries:
                arcs.add((a, b))

    def build(node: ProjectTree, path: Path) -> _Block:
        if node.is_leaf:
            if node.is_silent:
                return _Block(set(), set(), True)
            instance = fresh(node.label)
            return _Block({instance}, {instance}, False)
        if node.op == XOR:
            index = choice.selections[id_by_path[path]]
            return build(node.children[index], path + (index,))
        if node.op == LOOP:
            count = choice.unrolls.get(id_by_path[path], 0)
            best_redo = max(range(1, len(node.children)),
                            key=lambda i: (node.children[i].freq, -i))
            blocks = []
            for pass_no in range(count + 1):
                if pass_no:
                    blocks.append(build(node.children[best_redo], path + (best_redo,)))
                blocks.append(build(node.children[0], path + (0,)))
            return _chain(blocks, connect)
        if node.op == AND:
            parts = [build(child, path + (i,)) for i, child in enumerate(node.children)]
            entries = set().union(*(p.entries for p in parts))
            exits = set().union(*(p.exits for p in parts))
            return _Block(entries, exits, all(p.empty for p in parts))
        blocks = [build(child, path + (i,)) for i, child in enumerate(node.children)]
        return _chain(blocks, connect)

    root_block = build(tree, ())
    for entry in sorted(root_block.entries):
        arcs.add((START_NODE, entry))
    for exit_ in sorted(root_block.exits):
        arcs.add((exit_, END_NODE))
    if root_block.empty:
        arcs.add((START_NODE, END_NODE))
    return VariantPlan(tuple(activities), frozenset(arcs))


def _chain(blocks: list[_Block], connect) -> _Block:
    real = [b for b in blocks if not b.empty]
    if not real:
        return _Block(set(), set(), True)
    for left, right in zip(real, real[1:]):
        connect(left, right)
    return _Block(set(real[0].entries), set(real[-1].exits), False)


# ---------------------------------------------------------------------------
# durations

ESTIMATOR_KINDS = ("mean", "median", "p90", "fixed")


def estimate_durations(log: EventLog, kind: str = "mean",
                       project_id: str | None = None) -> DurationModel:
    """Per-activity duration estimates from the log, as exact rationals.

    ``fixed`` takes the durations observed in one named project; the other
    estimators aggregate over every occurrence in the log.
    """
    if kind not in ESTIMATOR_KINDS:
        raise ScheduleError(f"unknown duration estimator {kind!r}")
    if kind == "fixed":
        if project_id is None:
            raise ScheduleError("the fixed estimator needs a project id (fixed:<project>)")
        samples: dict[str, Fraction] = {}
        for trace in log:
            if trace.project_id != project_id:
                continue
            for event in trace.events:
                samples[event.activity] = event.duration
        if not samples:
            raise ScheduleError(f"no events for project {project_id!r}")
        return DurationModel(f"fixed:{project_id}", samples)

    observed: dict[str, list[Fraction]] = {}
    for trace in log:
        for event in trace.events:
            observed.setdefault(event.activity, []).append(event.duration)
    durations = {}
    for activity, values in observed.items():
        values.sort()
        if kind == "mean":
            durations[activity] = sum(values, Fraction(0)) / len(values)
        elif kind == "median":
            mid = len(values) // 2
            durations[activity] = (values[mid] if len(values) % 2
                                   else (values[mid - 1] + values[mid]) / 2)
        else:  # p90, nearest-rank
            rank = -(-9 * len(values) // 10)  # ceil(0.9 n)
            durations[activity] = values[rank - 1]
    return DurationModel(kind, durations)


def parse_estimator(text: str) -> tuple[str, str | None]:
    """Split ``"mean"`` / ``"fixed:proj1"`` into (kind, project id)."""
    kind, _, project = text.partition(":")
    return kind, (project or None)


# ---------------------------------------------------------------------------
# critical path method

def critical_path(plan: VariantPlan, durations: DurationModel) -> Schedule:
    """Forward/backward pass over the plan DAG.

    Returns exact early/late start/finish times per activity instance, the
    makespan and one critical path (the lexicographically smallest
    zero-slack activity sequence).
    """
    label_of = {a.id: a.label for a in plan.activities}
    duration_of = {a.id: durations.get(a.label) for a in plan.activities}
    duration_of[plan.start] = Fraction(0)
    duration_of[plan.end] = Fraction(0)

    order = _topological(plan)
    preds = plan.predecessors()
    succs = plan.successors()

    early_start: dict[str, Fraction] = {}
    early_finish: dict[str, Fraction] = {}
    for node in order:
        early_start[node] = max((early_finish[p] for p in preds[node]), default=Fraction(0))
        early_finish[node] = early_start[node] + duration_of[node]
    makespan = early_finish[plan.end]

    late_finish: dict[str, Fraction] = {}
    late_start: dict[str, Fraction] = {}
    for node in reversed(order):
        late_finish[node] = min((late_start[s] for s in succs[node]), default=makespan)
        late_start[node] = late_finish[node] - duration_of[node]

    entries = {
        a.id: ScheduleEntry(a.label, duration_of[a.id], early_start[a.id],
                            early_finish[a.id], late_start[a.id], late_finish[a.id])
        for a in plan.activities
    }

    path: list[str] = []
    node = plan.start
    while node != plan.end:
        candidates = [
            s for s in succs[node]
            if late_start[s] == early_start[s] and early_start[s] == early_finish[node]
        ]
        if not candidates:
            raise ScheduleError("internal error: broken critical path walk")
        node = min(candidates, key=lambda s: (label_of.get(s, ""), s))
        if node != plan.end:
            path.append(label_of[node])
    return Schedule(entries, makespan, tuple(path))


def _topological(plan: VariantPlan) -> list[str]:
    preds = plan.predecessors()
    remaining = {node: len(ps) for node, ps in preds.items()}
    succs = plan.successors()
    ready = sorted(node for node, count in remaining.items() if count == 0)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for nxt in sorted(succs[node]):
            remaining[nxt] -= 1
            if remaining[nxt] == 0:
                ready.append(nxt)
        ready.sort()
    if len(order) != len(remaining):
        raise ScheduleError("plan contains a precedence cycle")
    return order


# ---------------------------------------------------------------------------
# relaxation

def relaxation_report(baseline: Trace | Sequence[str], plan: VariantPlan,
                      durations: DurationModel) -> RelaxationReport:
    """Gain of the relaxed plan over executing the baseline serially.

    The baseline makespan is the sum of the estimated durations over the
    baseline activities; its activities must all appear in the plan.
    """
    labels = baseline.activities() if isinstance(baseline, Trace) else tuple(baseline)
    plan_labels = list(plan.labels())
    remaining = list(plan_labels)
    for label in labels:
        if label in remaining:
            remaining.remove(label)
        else:
            raise ScheduleError(f"baseline activity {label!r} is not part of the plan")
    baseline_makespan = sum((durations.get(label) for label in labels), Fraction(0))
    schedule = critical_path(plan, durations)
    gain = baseline_makespan - schedule.makespan
    percent = (gain / baseline_makespan) if baseline_makespan else Fraction(0)
    slack = {entry_id: entry.slack for entry_id, entry in schedule.entries.items()}
    return RelaxationReport(baseline_makespan, schedule.makespan, gain, percent, slack)


# ---------------------------------------------------------------------------
# export

def schedule_to_dict(schedule: Schedule) -> dict:
    ordered = sorted(schedule.entries.items(),
                     key=lambda kv: (kv[1].early_start, kv[1].label, kv[0]))
    return {
        "makespan": float(schedule.makespan),
        "critical_path": list(schedule.critical_path),
        "activities": [
            {
                "id": instance_id,
                "label": e.label,
                "duration": float(e.duration),
                "early_start": float(e.early_start),
                "early_finish": float(e.early_finish),
                "late_start": float(e.late_start),
                "late_finish": float(e.late_finish),
                "slack": float(e.slack),
            }
            for instance_id, e in ordered
        ],
    }


def schedule_text(schedule: Schedule) -> str:
    """Fixed-width activity table ordered by earliest start."""
    rows = sorted(schedule.entries.items(),
                  key=lambda kv: (kv[1].early_start, kv[1].label, kv[0]))
    lines = [f"{'activity':<12} {'dur':>7} {'ES':>7} {'EF':>7} {'LS':>7} {'LF':>7} {'slack':>7}"]
    for instance_id, e in rows:
        lines.append(
            f"{instance_id:<12} {_fmt(e.duration):>7} {_fmt(e.early_start):>7} "
            f"{_fmt(e.early_finish):>7} {_fmt(e.late_start):>7} {_fmt(e.late_finish):>7} "
            f"{_fmt(e.slack):>7}"
        )
    lines.append(f"makespan: {_fmt(schedule.makespan)} h")
    lines.append("critical path: " + " -> ".join(schedule.critical_path))
    return "\n".join(lines)


def relaxation_to_dict(report: RelaxationReport) -> dict:
    return {
        "baseline_makespan": float(report.baseline_makespan),
        "plan_makespan": float(report.plan_makespan),
        "gain": float(report.gain),
        "percent_gain": round(float(report.percent_gain) * 100, 2),
        "slack": {k: float(v) for k, v in sorted(report.slack.items())},
    }


def _fmt(value: Fraction) -> str:
    as_float = float(value)
    return f"{as_float:.2f}".rstrip("0").rstrip(".") if as_float != int(as_float) else str(int(as_float))
