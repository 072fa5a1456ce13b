"""Inductive discovery of project trees from event logs.

The miner recursively partitions the activity alphabet of a (sub-)log by
looking for one of four *cuts* of its directly-follows graph — exclusive
choice, sequence, parallel, redo loop — splits the log accordingly and
recurses.  When no cut applies it falls through to the *flower* model
``↺(τ, a₁, …, a_k)``, which fits any behaviour over the alphabet.

Cut conditions, with ``a ↦⁺ b`` meaning a non-empty directed path and
``a → b`` a direct arc, all quantified over distinct parts ``A_i``:

* sequence:   for ``i < j`` every ``a ∈ A_i``, ``b ∈ A_j`` has ``a ↦⁺ b``
  and not ``b ↦⁺ a``;
* exclusive:  no direct arc between different parts;
* parallel:   every part contains a start and an end activity, and every
  cross-part pair has the direct arc (hence in both directions);
* redo loop:  the first part contains all start and end activities; arcs
  from the body into a redo part leave only from end activities and arcs
  back enter only start activities; distinct redo parts are unconnected;
  and a redo part entered (left) by one end (start) activity is entered
  (left) by all of them.

A cut is *maximal*: no cut of the same operator has more parts.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations

from .dfg import DirectlyFollowsGraph, build_dfg
from .errors import ModelError
from .log import EventLog, Trace
from .tree import AND, LOOP, SEQ, XOR, ProjectTree, leaf, loop, silent
from .tree import xor as xor_node

CUT_ORDER = (XOR, SEQ, AND, LOOP)


@dataclass(frozen=True)
class Cut:
    operator: str
    parts: tuple[frozenset[str], ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ModelError("a cut needs at least two parts")


def find_cut(dfg: DirectlyFollowsGraph) -> Cut | None:
    """First applicable maximal cut, trying ×, →, ∧, ↺ in that order."""
    if len(dfg.activities) < 2:
        raise ModelError("cut detection needs at least two activities")
    for operator, finder in ((XOR, _xor_cut), (SEQ, _seq_cut), (AND, _and_cut), (LOOP, _loop_cut)):
        parts = finder(dfg)
        if parts is not None:
            cut = Cut(operator, tuple(parts))
            if not cut_satisfies(dfg, cut):  # defensive; the finders are exact
                raise ModelError(f"internal error: invalid {operator} cut {parts}")
            return cut
    return None


def _ordered(parts: list[set[str]]) -> list[frozenset[str]]:
    return [frozenset(p) for p in sorted(parts, key=min)]


def _undirected_components(nodes: set[str], edges: set[tuple[str, str]]) -> list[set[str]]:
    neighbours: dict[str, set[str]] = {n: set() for n in nodes}
    for a, b in edges:
        neighbours[a].add(b)
        neighbours[b].add(a)
    seen: set[str] = set()
    components = []
    for node in sorted(nodes):
        if node in seen:
            continue
        component = {node}
        stack = [node]
        while stack:
            for other in neighbours[stack.pop()]:
                if other not in component:
                    component.add(other)
                    stack.append(other)
        seen |= component
        components.append(component)
    return components


def _xor_cut(dfg: DirectlyFollowsGraph) -> list[frozenset[str]] | None:
    """Connected components of the undirected activity graph."""
    edges = {(a, b) for (a, b) in dfg.arcs if a in dfg.activities and b in dfg.activities}
    components = _undirected_components(set(dfg.activities), edges)
    if len(components) < 2:
        return None
    return _ordered(components)


def _seq_cut(dfg: DirectlyFollowsGraph) -> list[frozenset[str]] | None:
    """Strongly connected components, merged until totally ordered."""
    activities = sorted(dfg.activities)
    sccs = _strongly_connected(activities, dfg)
    group_of = {a: i for i, scc in enumerate(sccs) for a in scc}
    parent = list(range(len(sccs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    def connected(a: str, b: str) -> bool:
        return b in dfg.closure[a]

    # Merge mutually unreachable components until every pair of groups is
    # one-directionally ordered.
    changed = True
    while changed:
        changed = False
        for x, y in combinations(activities, 2):
            if find(group_of[x]) == find(group_of[y]):
                continue
            if not connected(x, y) and not connected(y, x):
                union(group_of[x], group_of[y])
                changed = True
    groups: dict[int, set[str]] = {}
    for a in activities:
        groups.setdefault(find(group_of[a]), set()).add(a)
    if len(groups) < 2:
        return None

    parts = list(groups.values())
    # Total order: part P precedes Q iff some activity of P reaches Q.
    ordered = sorted(parts, key=lambda p: sum(
        1 for q in parts if q is not p and connected(min(q), min(p))))
    return [frozenset(p) for p in ordered]


def _strongly_connected(activities: list[str], dfg: DirectlyFollowsGraph) -> list[set[str]]:
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[set[str]] = []
    counter = [0]

    def strong(v: str) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in dfg.successors.get(v, ()):
            if w not in dfg.activities:
                continue
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            component: set[str] = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                component.add(w)
                if w == v:
                    break
            sccs.append(component)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10 * len(activities) + 100))
    try:
        for v in activities:
            if v not in index:
                strong(v)
    finally:
        sys.setrecursionlimit(old_limit)
    return sccs


def _and_cut(dfg: DirectlyFollowsGraph) -> list[frozenset[str]] | None:
    """Components of the 'not mutually connected' graph, regrouped so every
    part keeps a start and an end activity."""
    starts = dfg.start_activities()
    ends = dfg.end_activities()
    if not starts or not ends:
        return None
    nodes = set(dfg.activities)
    edges = {
        (a, b)
        for a, b in combinations(sorted(nodes), 2)
        if not (dfg.has_arc(a, b) and dfg.has_arc(b, a))
    }
    components = _undirected_components(nodes, edges)
    if len(components) < 2:
        return None

    def covered(group: set[str]) -> bool:
        return bool(group & starts) and bool(group & ends)

    if all(covered(c) for c in components):
        return _ordered(components)

    grouping = _best_covering_grouping(components, covered)
    if grouping is None or len(grouping) < 2:
        return None
    return _ordered(grouping)


def _best_covering_grouping(components: list[set[str]], covered) -> list[set[str]] | None:
    """Group components so every group satisfies ``covered``, maximising the
    number of groups.  Exhaustive for small component counts, greedy beyond."""
    if len(components) <= 8:
        best: list[set[str]] | None = None

        def assign(i: int, groups: list[set[str]]):
            nonlocal best
            if best is not None and len(groups) + (len(components) - i) <= len(best):
                return  # cannot beat best even if every remaining component opens a group
            if i == len(components):
                if all(covered(g) for g in groups) and (best is None or len(groups) > len(best)):
                    best = [set(g) for g in groups]
                return
            for group in groups:
                group |= components[i]
                assign(i + 1, groups)
                group -= components[i]
            groups.append(set(components[i]))
            assign(i + 1, groups)
            groups.pop()

        assign(0, [])
        return best

    full = [set(c) for c in components if covered(c)]
    rest = [set(c) for c in components if not covered(c)]
    if not rest:
        return full
    merged: set[str] = set()
    for c in rest:
        merged |= c
    if covered(merged):
        return full + [merged]
    if not full:
        return None
    full[0] |= merged
    return full


def _loop_cut(dfg: DirectlyFollowsGraph) -> list[frozenset[str]] | None:
    """Body = start/end activities plus every component that cannot be a redo
    part; remaining components become the redo parts."""
    starts = dfg.start_activities()
    ends = dfg.end_activities()
    anchor = starts | ends
    if not anchor or anchor == dfg.activities:
        return None
    rest = set(dfg.activities) - anchor
    edges = {(a, b) for (a, b) in dfg.arcs if a in rest and b in rest}
    components = _undirected_components(rest, edges)

    body = set(anchor)
    redo_parts: list[set[str]] = []
    for component in components:
        if _redo_candidate(component, dfg, starts, ends):
            redo_parts.append(component)
        else:
            body |= component
    if not redo_parts:
        return None
    return [frozenset(body)] + _ordered(redo_parts)


def _redo_candidate(component: set[str], dfg: DirectlyFollowsGraph,
                    starts: frozenset[str], ends: frozenset[str]) -> bool:
    for b in component:
        entering = {a for a in starts | ends if dfg.has_arc(a, b)}
        leaving = {a for a in starts | ends if dfg.has_arc(b, a)}
        if entering - ends or leaving - starts:
            return False  # body connects via a non-end, or back via a non-start
        if entering and entering != ends:
            return False  # some but not all end activities enter b
        if leaving and leaving != starts:
            return False  # b returns to some but not all start activities
    return True


# ---------------------------------------------------------------------------
# validation (also used as a test oracle)

def cut_satisfies(dfg: DirectlyFollowsGraph, cut: Cut) -> bool:
    """Check the cut conditions literally (no maximality check)."""
    parts = cut.parts
    union: set[str] = set()
    for part in parts:
        if not part or part & union:
            return False
        union |= part
    if union != set(dfg.activities):
        return False

    if cut.operator == XOR:
        return not any(
            dfg.has_arc(a, b) or dfg.has_arc(b, a)
            for p, q in combinations(parts, 2) for a in p for b in q
        )
    if cut.operator == SEQ:
        for i, p in enumerate(parts):
            for q in parts[i + 1:]:
                for a in p:
                    for b in q:
                        if not (b in dfg.closure[a] and a not in dfg.closure[b]):
                            return False
        return True
    starts = dfg.start_activities()
    ends = dfg.end_activities()
    if cut.operator == AND:
        if any(not (p & starts) or not (p & ends) for p in parts):
            return False
        return all(
            dfg.has_arc(a, b) and dfg.has_arc(b, a)
            for p, q in combinations(parts, 2) for a in p for b in q
        )
    if cut.operator == LOOP:
        body, redos = set(parts[0]), parts[1:]
        if not (starts | ends) <= body:
            return False
        for p, q in combinations(redos, 2):
            if any(dfg.has_arc(a, b) or dfg.has_arc(b, a) for a in p for b in q):
                return False
        for redo in redos:
            for a in body:
                if any(dfg.has_arc(a, b) for b in redo) and a not in ends:
                    return False
                if any(dfg.has_arc(b, a) for b in redo) and a not in starts:
                    return False
            for b in redo:
                entering = {a for a in ends if dfg.has_arc(a, b)}
                if entering and entering != ends:
                    return False
                leaving = {a for a in starts if dfg.has_arc(b, a)}
                if leaving and leaving != starts:
                    return False
        return True
    return False


# ---------------------------------------------------------------------------
# log splitting

def split_log(log: EventLog, cut: Cut) -> list[EventLog]:
    """Project/segment every trace of ``log`` according to ``cut``."""
    part_of: dict[str, int] = {}
    for i, part in enumerate(cut.parts):
        for activity in part:
            part_of[activity] = i
    splitter = {XOR: _split_xor, SEQ: _split_seq, AND: _split_and, LOOP: _split_loop}[cut.operator]
    buckets: list[list[Trace]] = [[] for _ in cut.parts]
    for trace in log:
        splitter(trace, cut, part_of, buckets)
    return [EventLog(tuple(bucket), alphabet=cut.parts[i]) for i, bucket in enumerate(buckets)]


def _split_xor(trace: Trace, cut: Cut, part_of, buckets) -> None:
    if not trace.events:
        raise ModelError("exclusive-choice split hit an empty trace")
    target = part_of[trace.events[0].activity]
    if any(part_of[e.activity] != target for e in trace.events):
        raise ModelError(f"trace {trace.project_id!r} spans several exclusive branches")
    buckets[target].append(trace)


def _split_seq(trace: Trace, cut: Cut, part_of, buckets) -> None:
    position = 0
    events = trace.events
    for i in range(len(cut.parts)):
        segment = []
        while position < len(events) and part_of[events[position].activity] == i:
            segment.append(events[position])
            position += 1
        buckets[i].append(Trace(trace.project_id, tuple(segment)))
    if position != len(events):
        raise ModelError(f"trace {trace.project_id!r} is not assignable to the sequence cut")


def _split_and(trace: Trace, cut: Cut, part_of, buckets) -> None:
    for i in range(len(cut.parts)):
        projected = tuple(e for e in trace.events if part_of[e.activity] == i)
        buckets[i].append(Trace(trace.project_id, projected))


def _split_loop(trace: Trace, cut: Cut, part_of, buckets) -> None:
    if not trace.events:
        raise ModelError("loop split hit an empty trace")
    current = 0
    segment: list = []
    first = part_of[trace.events[0].activity]
    last = part_of[trace.events[-1].activity]
    if first != 0 or last != 0:
        raise ModelError(f"trace {trace.project_id!r} does not start and end in the loop body")
    for event in trace.events:
        target = part_of[event.activity]
        if target == current:
            segment.append(event)
            continue
        if current != 0 and target != 0:
            raise ModelError(f"trace {trace.project_id!r} jumps between redo parts")
        buckets[current].append(Trace(trace.project_id, tuple(segment)))
        current = target
        segment = [event]
    buckets[current].append(Trace(trace.project_id, tuple(segment)))


# ---------------------------------------------------------------------------
# recursion

def mine_tree(log: EventLog) -> ProjectTree:
    """Discover a project tree whose language contains every trace of ``log``."""
    if not log.traces:
        raise ModelError("cannot mine an empty log")
    return _mine(log)


def _mine(log: EventLog) -> ProjectTree:
    n = len(log.traces)
    empty = [t for t in log if not t.events]
    if empty:
        rest = [t for t in log if t.events]
        if not rest:
            return silent(freq=n)
        return xor_node(silent(freq=len(empty)),
                        _mine(EventLog(tuple(rest))), freq=n)

    alphabet = sorted({a for t in log for a in t.activities()})
    if len(alphabet) == 1:
        activity = alphabet[0]
        if all(t.activities() == (activity,) for t in log):
            return leaf(activity, freq=n)
        occurrences = sum(len(t.events) for t in log)
        return loop(silent(freq=n), leaf(activity, freq=occurrences), freq=n)

    dfg = build_dfg(log)
    cut = find_cut(dfg)
    if cut is None:
        occurrences = {a: 0 for a in alphabet}
        for t in log:
            for a in t.activities():
                occurrences[a] += 1
        redo = [leaf(a, freq=occurrences[a]) for a in alphabet]
        return loop(silent(freq=n), *redo, freq=n)

    sublogs = split_log(log, cut)
    children = tuple(_mine(sublog) for sublog in sublogs)
    return ProjectTree(cut.operator, children=children, freq=n)
