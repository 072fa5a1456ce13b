"""Decision mining: explain exclusive choices with case features.

Every place with two or more outgoing arcs is a *decision point*; each
outgoing branch is summarised by the visible activities it immediately
leads to (silent transitions are skipped).  Replaying a case against the
net reveals which branch it actually took, which labels one training
instance per case.  A small greedy decision tree over the case features
then yields human-readable routing rules such as::

    IF client = IZ THEN d (support=2, acc=1.00)
    IF client != IZ THEN {b,c} (support=2, acc=1.00)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ModelError
from .log import TAU, EventLog
from .petri import PetriNet, firing_sequence


@dataclass(frozen=True)
class DecisionPoint:
    id: str                                  # the place id
    place: str
    alternatives: tuple[frozenset[str], ...]
    branch_of: Mapping[str, int]             # transition id -> alternative index

    def alternative_names(self) -> tuple[str, ...]:
        return tuple(format_alternative(a) for a in self.alternatives)


@dataclass(frozen=True)
class DecisionInstance:
    project_id: str
    features: Mapping[str, object]
    label: str


@dataclass(frozen=True)
class RuleSplit:
    feature: str
    op: str          # "==" for categorical, "<=" for numeric
    value: object
    low: "RuleNode"  # match / below-threshold side
    high: "RuleNode"


@dataclass(frozen=True)
class RuleLeaf:
    label: str
    support: int
    correct: int


RuleNode = RuleSplit | RuleLeaf


@dataclass(frozen=True)
class DecisionRule:
    point_id: str
    root: RuleNode
    accuracy: Fraction
    alternatives: tuple[str, ...]

    def predict(self, features: Mapping[str, object]) -> str:
        node = self.root
        while isinstance(node, RuleSplit):
            node = node.low if _match(features, node.feature, node.op, node.value) else node.high
        return node.label


def _match(features: Mapping[str, object], feature: str, op: str, value: object) -> bool:
    actual = features.get(feature)
    if actual is None:
        return False
    if op == "==":
        return actual == value
    try:
        return float(actual) <= float(value)
    except (TypeError, ValueError):
        return False


def format_alternative(labels: frozenset[str]) -> str:
    if not labels:
        return TAU
    if len(labels) == 1:
        return next(iter(labels))
    return "{" + ",".join(sorted(labels)) + "}"


# ---------------------------------------------------------------------------
# decision points

def find_decision_points(net: PetriNet) -> list[DecisionPoint]:
    """One decision point per place with at least two outgoing arcs."""
    points = []
    for place in net.places:
        branches = net.outputs[place]
        if len(branches) < 2:
            continue
        alternatives: list[frozenset[str]] = []
        branch_of: dict[str, int] = {}
        for tid in branches:
            reachable = _visible_frontier(net, tid)
            if reachable in alternatives:
                branch_of[tid] = alternatives.index(reachable)
            else:
                branch_of[tid] = len(alternatives)
                alternatives.append(reachable)
        if len(alternatives) < 2:
            continue
        points.append(DecisionPoint(place, place, tuple(alternatives), branch_of))
    return points


def _visible_frontier(net: PetriNet, tid: str) -> frozenset[str]:
    """Visible labels first reachable through ``tid``, skipping silent steps."""
    seen_transitions = set()
    frontier: set[str] = set()
    stack = [tid]
    while stack:
        current = stack.pop()
        if current in seen_transitions:
            continue
        seen_transitions.add(current)
        spec = net.transition(current)
        if spec.label is not None:
            frontier.add(spec.label)
            continue
        for place in net.outputs[current]:
            stack.extend(net.outputs[place])
    return frozenset(frontier)


# ---------------------------------------------------------------------------
# instance extraction

def extract_instances(net: PetriNet, log: EventLog, point: DecisionPoint) -> list[DecisionInstance]:
    """One labelled instance per case whose replay passes the decision place.

    The label is the alternative of the first transition that consumes a
    token from the place during replay, so it reflects what the case
    actually did.  Case features are taken from the first event.
    """
    sequences: dict[tuple[str, ...], list[str] | None] = {}
    instances = []
    for trace in log:
        labels = trace.activities()
        if labels not in sequences:
            sequences[labels] = firing_sequence(net, labels)
        fired = sequences[labels]
        if fired is None:
            raise ModelError(f"trace {trace.project_id!r} does not replay on the net")
        branch = next((point.branch_of[tid] for tid in fired if tid in point.branch_of), None)
        if branch is None:
            continue  # the case never reached this decision
        features = dict(trace.events[0].features) if trace.events else {}
        label = format_alternative(point.alternatives[branch])
        instances.append(DecisionInstance(trace.project_id, features, label))
    return instances


# ---------------------------------------------------------------------------
# rule learning

@dataclass(frozen=True)
class RuleConfig:
    max_depth: int = 4
    min_leaf: int = 2


def learn_rules(instances: Sequence[DecisionInstance],
                config: RuleConfig = RuleConfig()) -> DecisionRule:
    """Fit a greedy impurity-minimising tree over the instance features.

    Splits are binary: equality on categorical features, midpoint
    thresholds on numeric ones.  Ties go to the lexicographically smallest
    feature name, then smallest value.  Training accuracy is exact.
    """
    if not instances:
        raise ModelError("rule learning needs at least one instance")
    labels = sorted({i.label for i in instances})
    features = sorted({name for i in instances for name in i.features})
    if len(labels) > 1 and not features:
        raise ModelError("no usable features to explain the decision")

    def gini(rows: Sequence[DecisionInstance]) -> Fraction:
        total = len(rows)
        counts: dict[str, int] = {}
        for r in rows:
            counts[r.label] = counts.get(r.label, 0) + 1
        return Fraction(1) - sum(Fraction(c, total) ** 2 for c in counts.values())

    def majority_leaf(rows: Sequence[DecisionInstance]) -> RuleLeaf:
        counts: dict[str, int] = {}
        for r in rows:
            counts[r.label] = counts.get(r.label, 0) + 1
        label = min(counts, key=lambda l: (-counts[l], l))
        return RuleLeaf(label, len(rows), counts[label])

    def candidate_splits(rows: Sequence[DecisionInstance]):
        for feature in features:
            values = [r.features[feature] for r in rows if feature in r.features]
            if len(values) != len(rows):
                continue  # never split on a feature that is missing somewhere
            numeric = all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
            if numeric:
                ordered = sorted(set(values))
                for a, b in zip(ordered, ordered[1:]):
                    yield feature, "<=", (a + b) / 2.0
            else:
                for value in sorted(set(map(str, values))):
                    yield feature, "==", value

    def partition(rows, feature, op, value):
        low = [r for r in rows if _match(r.features, feature, op, value)]
        high = [r for r in rows if not _match(r.features, feature, op, value)]
        return low, high

    def grow(rows: Sequence[DecisionInstance], depth: int) -> RuleNode:
        if depth >= config.max_depth or len(rows) < 2 * config.min_leaf or gini(rows) == 0:
            return majority_leaf(rows)
        best = None
        base = gini(rows)
        for feature, op, value in candidate_splits(rows):
            low, high = partition(rows, feature, op, value)
            if len(low) < config.min_leaf or len(high) < config.min_leaf:
                continue
            score = (Fraction(len(low), len(rows)) * gini(low)
                     + Fraction(len(high), len(rows)) * gini(high))
            key = (score, feature, str(value))
            if score < base and (best is None or key < best[0]):
                best = (key, feature, op, value, low, high)
        if best is None:
            return majority_leaf(rows)
        _, feature, op, value, low, high = best
        return RuleSplit(feature, op, value, grow(low, depth + 1), grow(high, depth + 1))

    root = grow(list(instances), 0)
    correct = _count_correct(root)
    point_labels = tuple(labels)
    return DecisionRule("", root, Fraction(correct, len(instances)), point_labels)


def _count_correct(node: RuleNode) -> int:
    if isinstance(node, RuleLeaf):
        return node.correct
    return _count_correct(node.low) + _count_correct(node.high)


def learn_rules_for_point(net: PetriNet, log: EventLog, point: DecisionPoint,
                          config: RuleConfig = RuleConfig()) -> DecisionRule:
    instances = extract_instances(net, log, point)
    rule = learn_rules(instances, config)
    return replace(rule, point_id=point.id, alternatives=point.alternative_names())


# ---------------------------------------------------------------------------
# rendering

def _negate(op: str) -> str:
    return "!=" if op == "==" else ">"


def _format_value(value: object) -> str:
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    return str(value)


def rule_paths(rule: DecisionRule) -> list[tuple[tuple[str, ...], RuleLeaf]]:
    """(conditions, leaf) pairs, one per leaf, left-to-right."""
    paths: list[tuple[tuple[str, ...], RuleLeaf]] = []

    def walk(node: RuleNode, conditions: tuple[str, ...]) -> None:
        if isinstance(node, RuleLeaf):
            paths.append((conditions, node))
            return
        shown = "=" if node.op == "==" else node.op
        walk(node.low, conditions + (f"{node.feature} {shown} {_format_value(node.value)}",))
        walk(node.high, conditions + (f"{node.feature} {_negate(node.op)} {_format_value(node.value)}",))

    walk(rule.root, ())
    return paths


def rule_text(rule: DecisionRule) -> str:
    """One line per leaf: ``IF <cond> [AND ...] THEN <alt> (support=n, acc=x)``."""
    lines = []
    for conditions, leaf in rule_paths(rule):
        acc = leaf.correct / leaf.support if leaf.support else 0.0
        stats = f"(support={leaf.support}, acc={acc:.2f})"
        if conditions:
            lines.append(f"IF {' AND '.join(conditions)} THEN {leaf.label} {stats}")
        else:
            lines.append(f"ALWAYS {leaf.label} {stats}")
    return "\n".join(lines)


def rule_to_dict(rule: DecisionRule) -> dict:
    def node_dict(node: RuleNode) -> dict:
        if isinstance(node, RuleLeaf):
            return {"kind": "leaf", "label": node.label,
                    "support": node.support, "correct": node.correct}
        return {"kind": "split", "feature": node.feature, "op": node.op,
                "value": node.value, "low": node_dict(node.low), "high": node_dict(node.high)}

    return {
        "point": rule.point_id,
        "accuracy": float(rule.accuracy),
        "alternatives": list(rule.alternatives),
        "text": rule_text(rule),
        "tree": node_dict(rule.root),
    }


def annotate_rules(net: PetriNet, rules: Sequence[DecisionRule]) -> PetriNet:
    """Attach per-branch rule text to the arcs leaving each decision place."""
    points = {p.id: p for p in find_decision_points(net)}
    arc_rules = dict(net.arc_rules)
    for rule in rules:
        point = points.get(rule.point_id)
        if point is None:
            raise ModelError(f"rule references decision point {rule.point_id!r} "
                             f"which is not present in the net")
        by_label: dict[str, list[str]] = {}
        for conditions, leaf in rule_paths(rule):
            text = " AND ".join(conditions) if conditions else "always"
            by_label.setdefault(leaf.label, []).append(text)
        for tid, index in point.branch_of.items():
            label = format_alternative(point.alternatives[index])
            if label in by_label:
                arc_rules[(point.place, tid)] = " OR ".join(by_label[label])
    return replace(net, arc_rules=arc_rules)
