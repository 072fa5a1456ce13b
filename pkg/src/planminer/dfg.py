"""Directly-follows graphs over event logs.

Nodes are the activities of the log plus the dummy entry ``▶`` and exit
``■``.  An arc ``a → b`` with frequency ``n`` means that in ``n`` places
across the log activity ``b`` immediately followed ``a`` within a trace;
``▶ → a`` and ``a → ■`` count trace starts and ends.  An empty trace
contributes a single ``▶ → ■`` arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import ModelError
from .log import END, START, EventLog


@dataclass(frozen=True)
class DirectlyFollowsGraph:
    activities: frozenset[str]
    arcs: Mapping[tuple[str, str], int]
    case_count: int
    # derived, filled in __post_init__
    successors: Mapping[str, frozenset[str]] = field(default_factory=dict, compare=False)
    closure: Mapping[str, frozenset[str]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        succ: dict[str, set[str]] = {node: set() for node in self.activities | {START, END}}
        for (src, dst) in self.arcs:
            succ.setdefault(src, set()).add(dst)
            succ.setdefault(dst, set())
        closure: dict[str, frozenset[str]] = {}
        for node in succ:
            seen: set[str] = set()
            stack = list(succ[node])
            while stack:
                item = stack.pop()
                if item in seen:
                    continue
                seen.add(item)
                stack.extend(succ.get(item, ()))
            closure[node] = frozenset(seen)
        object.__setattr__(self, "successors", {k: frozenset(v) for k, v in succ.items()})
        object.__setattr__(self, "closure", closure)

    def start_activities(self) -> frozenset[str]:
        return frozenset(b for (a, b) in self.arcs if a == START and b != END)

    def end_activities(self) -> frozenset[str]:
        return frozenset(a for (a, b) in self.arcs if b == END and a != START)

    def has_arc(self, a: str, b: str) -> bool:
        return (a, b) in self.arcs


def build_dfg(log: EventLog) -> DirectlyFollowsGraph:
    """Count directly-follows pairs of a non-empty log."""
    if not log.traces:
        raise ModelError("cannot build a directly-follows graph from an empty log")
    arcs: dict[tuple[str, str], int] = {}

    def bump(a: str, b: str) -> None:
        arcs[(a, b)] = arcs.get((a, b), 0) + 1

    for trace in log:
        acts = trace.activities()
        if not acts:
            bump(START, END)
            continue
        bump(START, acts[0])
        for a, b in zip(acts, acts[1:]):
            bump(a, b)
        bump(acts[-1], END)
    return DirectlyFollowsGraph(log.alphabet, arcs, len(log.traces))


def reaches(dfg: DirectlyFollowsGraph, x: str, y: str) -> bool:
    """True iff the graph has a non-empty directed path from ``x`` to ``y``."""
    if x not in dfg.activities or y not in dfg.activities:
        raise ModelError(f"reaches() is defined on activity nodes, got {x!r}, {y!r}")
    return y in dfg.closure[x]


def dfg_to_dot(dfg: DirectlyFollowsGraph) -> str:
    """Graphviz rendering; ▶ is a filled triangle, ■ a square."""
    lines = ["digraph dfg {", "  rankdir=LR;"]
    lines.append(f'  "{START}" [shape=triangle, style=filled, fillcolor=black, fontcolor=white];')
    lines.append(f'  "{END}" [shape=square, style=filled, fillcolor=black, fontcolor=white];')
    for activity in sorted(dfg.activities):
        lines.append(f'  "{activity}" [shape=ellipse];')
    for (src, dst), freq in sorted(dfg.arcs.items()):
        lines.append(f'  "{src}" -> "{dst}" [label="{freq}"];')
    lines.append("}")
    return "\n".join(lines)
