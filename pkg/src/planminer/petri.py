"""Timed workflow nets.

A workflow net is a Petri net with one source place, one sink place and
every node on a path between them.  Project trees translate into such nets
block by block; silent ``τ`` transitions glue parallel splits/joins and
loop entries/exits together and always take zero time.

Frequency filtering removes arcs whose case frequency falls below a share
``γ`` of the case count, then drops transitions left without any places and
places left without any arcs.  Filtering never repairs the net: the
structural report of the result tells the caller what broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ModelError
from .log import TAU, Trace
from .tree import AND, LOOP, SEQ, XOR, ProjectTree

DEFAULT_MAX_STATES = 100_000


@dataclass(frozen=True)
class TransitionSpec:
    id: str
    label: str | None  # None for silent transitions
    freq: int = 0
    duration: Fraction = Fraction(0)


@dataclass(frozen=True)
class XorBinding:
    """Ties a decision place back to the tree node it came from."""

    place: str
    node: str                      # tree node id, e.g. "xor1"
    branches: Mapping[str, int]    # transition id -> child index


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[TransitionSpec, ...]
    arcs: Mapping[tuple[str, str], int]   # (source id, target id) -> frequency
    source: str
    sink: str
    xor_bindings: tuple[XorBinding, ...] = ()
    arc_rules: Mapping[tuple[str, str], str] = field(default_factory=dict)
    # derived
    inputs: Mapping[str, tuple[str, ...]] = field(default_factory=dict, compare=False)
    outputs: Mapping[str, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        place_set = set(self.places)
        trans_ids = [t.id for t in self.transitions]
        trans_set = set(trans_ids)
        if len(trans_set) != len(trans_ids) or place_set & trans_set:
            raise ModelError("place and transition ids must be unique and disjoint")
        if self.source not in place_set or self.sink not in place_set:
            raise ModelError("source and sink must be places of the net")
        inputs: dict[str, list[str]] = {n: [] for n in list(self.places) + trans_ids}
        outputs: dict[str, list[str]] = {n: [] for n in list(self.places) + trans_ids}
        for (src, dst) in self.arcs:
            if src not in inputs or dst not in inputs:
                raise ModelError(f"arc endpoints unknown: {(src, dst)}")
            if (src in place_set) == (dst in place_set):
                raise ModelError(f"arc {(src, dst)} does not alternate place/transition")
            outputs[src].append(dst)
            inputs[dst].append(src)
        object.__setattr__(self, "inputs", {k: tuple(sorted(v)) for k, v in inputs.items()})
        object.__setattr__(self, "outputs", {k: tuple(sorted(v)) for k, v in outputs.items()})

    def transition(self, tid: str) -> TransitionSpec:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise ModelError(f"unknown transition {tid!r}")


@dataclass(frozen=True)
class StructuralReport:
    is_workflow_net: bool
    disconnected_nodes: tuple[str, ...]
    dead_transitions: tuple[str, ...]
    sound: bool | None   # None when the state space exceeded the bound

    @property
    def healthy(self) -> bool:
        return self.is_workflow_net and self.sound is True and not self.dead_transitions


# ---------------------------------------------------------------------------
# tree -> net translation

class _Builder:
    def __init__(self):
        self.places: list[str] = ["start"]
        self.transitions: list[TransitionSpec] = []
        self.arcs: dict[tuple[str, str], int] = {}
        self.bindings: list[XorBinding] = []
        self._place_counter = 0
        self._trans_counter = 0

    def place(self) -> str:
        self._place_counter += 1
        name = f"p{self._place_counter}"
        self.places.append(name)
        return name

    def transition(self, label: str | None, freq: int, duration: Fraction) -> str:
        self._trans_counter += 1
        tid = f"t{self._trans_counter}"
        self.transitions.append(TransitionSpec(tid, label, freq, duration))
        return tid

    def arc(self, src: str, dst: str, freq: int) -> None:
        self.arcs[(src, dst)] = self.arcs.get((src, dst), 0) + freq


def tree_to_petri(tree: ProjectTree, durations: Mapping[str, Fraction] | None = None) -> PetriNet:
    """Translate a project tree into a timed workflow net.

    ``durations`` optionally assigns firing durations to visible labels;
    silent transitions always get zero.
    """
    from .tree import indexed_nodes, subtree_at

    builder = _Builder()
    ids = {path: node_id for node_id, path in indexed_nodes(tree).items()}

    def duration_of(label: str) -> Fraction:
        if durations and label in durations:
            return Fraction(durations[label])
        return Fraction(0)

    def build(node: ProjectTree, entry: str, exit_: str, path) -> None:
        if node.is_leaf:
            label = None if node.is_silent else node.label
            tid = builder.transition(label, node.freq, duration_of(node.label) if label else Fraction(0))
            builder.arc(entry, tid, node.freq)
            builder.arc(tid, exit_, node.freq)
            return
        if node.op == SEQ:
            current = entry
            for i, child in enumerate(node.children):
                nxt = exit_ if i == len(node.children) - 1 else builder.place()
                build(child, current, nxt, path + (i,))
                current = nxt
            return
        if node.op == XOR:
            branch_heads: dict[str, int] = {}
            for i, child in enumerate(node.children):
                before = {t.id for t in builder.transitions}
                build(child, entry, exit_, path + (i,))
                for t in builder.transitions:
                    if t.id not in before and (entry, t.id) in builder.arcs:
                        branch_heads[t.id] = i
            builder.bindings.append(XorBinding(entry, ids[path], dict(branch_heads)))
            return
        if node.op == AND:
            split = builder.transition(None, node.freq, Fraction(0))
            join = builder.transition(None, node.freq, Fraction(0))
            builder.arc(entry, split, node.freq)
            builder.arc(join, exit_, node.freq)
            for i, child in enumerate(node.children):
                child_in = builder.place()
                child_out = builder.place()
                builder.arc(split, child_in, node.freq)
                builder.arc(child_out, join, node.freq)
                build(child, child_in, child_out, path + (i,))
            return
        # loop: guard the body with silent entry/exit transitions so redo
        # arcs cannot capture tokens that belong to sibling branches
        enter = builder.transition(None, node.freq, Fraction(0))
        leave = builder.transition(None, node.freq, Fraction(0))
        body_in = builder.place()
        body_out = builder.place()
        builder.arc(entry, enter, node.freq)
        builder.arc(enter, body_in, node.freq)
        builder.arc(body_out, leave, node.freq)
        builder.arc(leave, exit_, node.freq)
        build(node.children[0], body_in, body_out, path + (0,))
        for i, child in enumerate(node.children[1:], start=1):
            build(child, body_out, body_in, path + (i,))

    build(tree, "start", "end", ())
    builder.places.append("end")
    return PetriNet(
        places=tuple(builder.places),
        transitions=tuple(builder.transitions),
        arcs=dict(builder.arcs),
        source="start",
        sink="end",
        xor_bindings=tuple(builder.bindings),
    )


# ---------------------------------------------------------------------------
# token replay

def _fire(marking: tuple, net: PetriNet, tid: str) -> tuple | None:
    counts = dict(marking)
    for place in net.inputs[tid]:
        if counts.get(place, 0) <= 0:
            return None
        counts[place] -= 1
        if not counts[place]:
            del counts[place]
    for place in net.outputs[tid]:
        counts[place] = counts.get(place, 0) + 1
    return tuple(sorted(counts.items()))


def firing_sequence(net: PetriNet, labels: Sequence[str]) -> list[str] | None:
    """A transition firing order whose visible labels equal ``labels`` and
    that ends with a single token on the sink, or None if none exists."""
    initial = ((net.source, 1),)
    final = ((net.sink, 1),)
    target = tuple(labels)
    seen: set[tuple[tuple, int]] = set()

    def search(marking: tuple, position: int, fired: list[str]) -> list[str] | None:
        if (marking, position) in seen:
            return None
        seen.add((marking, position))
        if marking == final and position == len(target):
            return list(fired)
        if len(seen) > DEFAULT_MAX_STATES:
            raise ModelError("replay state space exceeded the exploration bound")
        for t in net.transitions:
            visible = t.label is not None
            if visible and (position >= len(target) or t.label != target[position]):
                continue
            nxt = _fire(marking, net, t.id)
            if nxt is None:
                continue
            fired.append(t.id)
            result = search(nxt, position + (1 if visible else 0), fired)
            if result is not None:
                return result
            fired.pop()
        return None

    return search(initial, 0, [])


def replay_trace(net: PetriNet, trace: Trace | Sequence[str]) -> bool:
    """True iff the net can replay the trace from source to sink."""
    labels = trace.activities() if isinstance(trace, Trace) else tuple(trace)
    return firing_sequence(net, labels) is not None


# ---------------------------------------------------------------------------
# structural analysis

def check_structure(net: PetriNet, max_states: int = DEFAULT_MAX_STATES) -> StructuralReport:
    """Workflow-net shape, connectivity, dead transitions and soundness.

    Soundness is decided by exhaustive reachability exploration; when the
    state space exceeds ``max_states`` the verdict is ``None`` (unknown).
    """
    nodes = list(net.places) + [t.id for t in net.transitions]
    forward = _closure(net, net.source, net.outputs)
    backward = _closure(net, net.sink, net.inputs)
    disconnected = tuple(sorted(n for n in nodes
                                if n not in forward or n not in backward))
    shape_ok = (
        not net.inputs[net.source]
        and not net.outputs[net.sink]
        and not disconnected
        and all(not (net.inputs[p] == () and p != net.source) for p in net.places)
        and all(not (net.outputs[p] == () and p != net.sink) for p in net.places)
    )

    initial = ((net.source, 1),)
    final = ((net.sink, 1),)
    seen: dict[tuple, list[tuple]] = {}
    fired: set[str] = set()
    queue = [initial]
    bounded = True
    while queue:
        marking = queue.pop()
        if marking in seen:
            continue
        seen[marking] = []
        if len(seen) > max_states:
            bounded = False
            break
        for t in net.transitions:
            nxt = _fire(marking, net, t.id)
            if nxt is None:
                continue
            fired.add(t.id)
            seen[marking].append(nxt)
            if nxt not in seen:
                queue.append(nxt)

    dead = tuple(sorted(t.id for t in net.transitions if t.id not in fired))
    if not bounded:
        return StructuralReport(shape_ok, disconnected, dead, None)

    # option to complete: the final marking is reachable from every state
    can_finish: set[tuple] = {final} if final in seen else set()
    changed = True
    while changed:
        changed = False
        for marking, nexts in seen.items():
            if marking not in can_finish and any(n in can_finish for n in nexts):
                can_finish.add(marking)
                changed = True
    proper = all(
        marking == final
        for marking in seen
        if any(place == net.sink and count > 0 for place, count in marking)
    )
    sound = shape_ok and proper and not dead and len(can_finish) == len(seen)
    return StructuralReport(shape_ok, disconnected, dead, sound)


def _closure(net: PetriNet, origin: str, step: Mapping[str, tuple[str, ...]]) -> set[str]:
    seen = {origin}
    stack = [origin]
    while stack:
        for nxt in step[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# frequency filtering

def filter_model(net: PetriNet, gamma, case_count: int) -> tuple[PetriNet, StructuralReport]:
    """Drop arcs with case share below ``gamma``, then fully detached nodes.

    ``gamma`` may be a Fraction, Decimal, int, or decimal string and is
    handled exactly; 0 keeps the net identical.  Returns the filtered net
    and the structural report of the result.
    """
    gamma = _exact_gamma(gamma)
    if case_count <= 0:
        raise ModelError("case_count must be positive")
    kept_arcs = {
        arc: freq for arc, freq in net.arcs.items()
        if Fraction(freq, case_count) >= gamma
    }

    def touched(node: str) -> bool:
        return any(node in arc for arc in kept_arcs)

    transitions = tuple(t for t in net.transitions if touched(t.id))
    places = tuple(p for p in net.places if touched(p) or p in (net.source, net.sink))
    kept_transitions = {t.id for t in transitions}
    kept_places = set(places)
    kept_arcs = {
        (src, dst): freq
        for (src, dst), freq in kept_arcs.items()
        if {src, dst} <= kept_places | kept_transitions
    }
    bindings = []
    for binding in net.xor_bindings:
        branches = {tid: idx for tid, idx in binding.branches.items()
                    if tid in kept_transitions and (binding.place, tid) in kept_arcs}
        if binding.place in kept_places and branches:
            bindings.append(XorBinding(binding.place, binding.node, branches))
    filtered = PetriNet(
        places=places,
        transitions=transitions,
        arcs=kept_arcs,
        source=net.source,
        sink=net.sink,
        xor_bindings=tuple(bindings),
        arc_rules={arc: text for arc, text in net.arc_rules.items() if arc in kept_arcs},
    )
    return filtered, check_structure(filtered)


def _exact_gamma(gamma) -> Fraction:
    if isinstance(gamma, float):
        gamma = str(gamma)  # exact decimal reading, not the binary float
    value = Fraction(gamma)
    if not 0 <= value <= 1:
        raise ModelError(f"gamma must lie in [0, 1], got {value}")
    return value


# ---------------------------------------------------------------------------
# export

def net_to_dict(net: PetriNet) -> dict:
    return {
        "places": list(net.places),
        "transitions": [
            {
                "id": t.id,
                "label": t.label,
                "freq": t.freq,
                "duration": float(t.duration),
            }
            for t in net.transitions
        ],
        "arcs": [
            {
                "source": src,
                "target": dst,
                "freq": freq,
                **({"rule": net.arc_rules[(src, dst)]} if (src, dst) in net.arc_rules else {}),
            }
            for (src, dst), freq in sorted(net.arcs.items())
        ],
        "source": net.source,
        "sink": net.sink,
        "xor_bindings": [
            {"place": b.place, "node": b.node, "branches": dict(sorted(b.branches.items()))}
            for b in net.xor_bindings
        ],
    }


def net_to_dot(net: PetriNet) -> str:
    """Graphviz rendering; silent transitions are filled black rectangles."""
    lines = ["digraph net {", "  rankdir=LR;"]
    for place in net.places:
        lines.append(f'  "{place}" [shape=circle, label="{place}"];')
    for t in net.transitions:
        if t.label is None:
            lines.append(f'  "{t.id}" [shape=rect, style=filled, fillcolor=black, '
                         f'label="{TAU}", fontcolor=white, width=0.15];')
        else:
            lines.append(f'  "{t.id}" [shape=rect, label="{t.label} ({t.freq})"];')
    for (src, dst), freq in sorted(net.arcs.items()):
        rule = net.arc_rules.get((src, dst))
        label = f"{freq}" if rule is None else f"{freq}\\n{rule}"
        lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)
