"""Block-structured process trees.

A tree node is either a leaf carrying an activity label (``τ`` for a silent
step) or an operator over child subtrees:

* ``seq``  – children run one after another,
* ``xor``  – exactly one child runs,
* ``and``  – children run concurrently (any interleaving),
* ``loop`` – first child is the body, the others are redo parts; the body
  runs, then optionally a redo part followed by the body again, repeatedly.

Every node carries a case frequency: how many cases of the mined log were
routed through it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .errors import ModelError
from .log import TAU

SEQ = "seq"
XOR = "xor"
AND = "and"
LOOP = "loop"
LEAF = "leaf"
OPERATORS = (SEQ, XOR, AND, LOOP)

OPERATOR_SYMBOLS = {SEQ: "→", XOR: "×", AND: "∧", LOOP: "↺"}


@dataclass(frozen=True)
class ProjectTree:
    op: str
    label: str | None = None
    children: tuple["ProjectTree", ...] = ()
    freq: int = 0

    def __post_init__(self):
        if self.op == LEAF:
            if not self.label or self.children:
                raise ModelError("leaf nodes carry a label and no children")
        elif self.op in OPERATORS:
            if self.label is not None or not self.children:
                raise ModelError(f"{self.op} nodes carry children and no label")
            if self.op == LOOP and len(self.children) < 2:
                raise ModelError("loop nodes need a body and at least one redo part")
        else:
            raise ModelError(f"unknown operator {self.op!r}")

    @property
    def is_leaf(self) -> bool:
        return self.op == LEAF

    @property
    def is_silent(self) -> bool:
        return self.op == LEAF and self.label == TAU


def leaf(label: str, freq: int = 0) -> ProjectTree:
    return ProjectTree(LEAF, label=label, freq=freq)


def silent(freq: int = 0) -> ProjectTree:
    return ProjectTree(LEAF, label=TAU, freq=freq)


def seq(*children: ProjectTree, freq: int = 0) -> ProjectTree:
    return ProjectTree(SEQ, children=tuple(children), freq=freq)


def xor(*children: ProjectTree, freq: int = 0) -> ProjectTree:
    return ProjectTree(XOR, children=tuple(children), freq=freq)


def par(*children: ProjectTree, freq: int = 0) -> ProjectTree:
    return ProjectTree(AND, children=tuple(children), freq=freq)


def loop(*children: ProjectTree, freq: int = 0) -> ProjectTree:
    return ProjectTree(LOOP, children=tuple(children), freq=freq)


def visible_labels(tree: ProjectTree) -> frozenset[str]:
    """All non-silent leaf labels under ``tree``."""
    if tree.is_leaf:
        return frozenset() if tree.is_silent else frozenset({tree.label})
    out: set[str] = set()
    for child in tree.children:
        out |= visible_labels(child)
    return frozenset(out)


def shape(tree: ProjectTree) -> object:
    """Frequency-free structural form, convenient for golden assertions."""
    if tree.is_leaf:
        return tree.label
    return (tree.op, *[shape(c) for c in tree.children])


# ---------------------------------------------------------------------------
# node addressing

Path = tuple[int, ...]


def indexed_nodes(tree: ProjectTree) -> dict[str, Path]:
    """Stable ids for operator nodes, assigned in pre-order.

    The n-th ``xor`` node (pre-order) is named ``xorN`` and so on for the
    other operators.  Ids address nodes by child path, so structurally equal
    subtrees stay distinguishable.
    """
    counters = {op: 0 for op in OPERATORS}
    ids: dict[str, Path] = {}

    def walk(node: ProjectTree, path: Path) -> None:
        if node.is_leaf:
            return
        counters[node.op] += 1
        ids[f"{node.op}{counters[node.op]}"] = path
        for i, child in enumerate(node.children):
            walk(child, path + (i,))

    walk(tree, ())
    return ids


def subtree_at(tree: ProjectTree, path: Path) -> ProjectTree:
    node = tree
    for index in path:
        node = node.children[index]
    return node


# ---------------------------------------------------------------------------
# serialization

def tree_to_dict(tree: ProjectTree) -> dict:
    if tree.is_leaf:
        return {"op": LEAF, "label": tree.label, "freq": tree.freq}
    return {"op": tree.op, "freq": tree.freq, "children": [tree_to_dict(c) for c in tree.children]}


def tree_from_dict(data: Mapping) -> ProjectTree:
    op = data.get("op")
    if op == LEAF:
        return ProjectTree(LEAF, label=data.get("label"), freq=int(data.get("freq", 0)))
    children = tuple(tree_from_dict(c) for c in data.get("children", ()))
    return ProjectTree(op, children=children, freq=int(data.get("freq", 0)))


def tree_to_json(tree: ProjectTree) -> str:
    return json.dumps(tree_to_dict(tree), ensure_ascii=False, indent=2)


def tree_from_json(text: str) -> ProjectTree:
    return tree_from_dict(json.loads(text))


def format_tree(tree: ProjectTree, indent: int = 0) -> str:
    """Indented text rendering using the operator symbols."""
    pad = "  " * indent
    if tree.is_leaf:
        return f"{pad}{tree.label} [{tree.freq}]"
    head = f"{pad}{OPERATOR_SYMBOLS[tree.op]} [{tree.freq}]"
    return "\n".join([head] + [format_tree(c, indent + 1) for c in tree.children])


def tree_to_dot(tree: ProjectTree) -> str:
    """Graphviz rendering: operator circles over activity-leaf boxes."""
    lines = ["digraph tree {", "  rankdir=TB;"]

    def walk(node: ProjectTree, name: str) -> None:
        if node.is_leaf:
            lines.append(f'  "{name}" [shape=box, label="{node.label} ({node.freq})"];')
            return
        symbol = OPERATOR_SYMBOLS[node.op]
        lines.append(f'  "{name}" [shape=circle, label="{symbol}"];')
        for i, child in enumerate(node.children):
            child_name = f"{name}.{i}"
            walk(child, child_name)
            lines.append(f'  "{name}" -> "{child_name}";')

    walk(tree, "n")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# trace language

def enumerate_language(tree: ProjectTree, max_len: int) -> frozenset[tuple[str, ...]]:
    """All traces of the tree's language with length ``<= max_len``.

    Loops are expanded to a fixpoint, which terminates because the set of
    bounded-length traces over a finite alphabet is finite.
    """

    def concat(left: frozenset, right: frozenset) -> frozenset:
        return frozenset(a + b for a in left for b in right if len(a) + len(b) <= max_len)

    def interleave(u: tuple, v: tuple) -> frozenset:
        if not u:
            return frozenset({v})
        if not v:
            return frozenset({u})
        if len(u) + len(v) > max_len:
            return frozenset()
        first = frozenset((u[0],) + rest for rest in interleave(u[1:], v))
        second = frozenset((v[0],) + rest for rest in interleave(u, v[1:]))
        return first | second

    def lang(node: ProjectTree) -> frozenset[tuple[str, ...]]:
        if node.is_leaf:
            return frozenset({()}) if node.is_silent else frozenset({(node.label,)})
        if node.op == SEQ:
            acc = frozenset({()})
            for child in node.children:
                acc = concat(acc, lang(child))
            return acc
        if node.op == XOR:
            out: frozenset = frozenset()
            for child in node.children:
                out |= lang(child)
            return out
        if node.op == AND:
            acc = frozenset({()})
            for child in node.children:
                acc = frozenset(t for u in acc for v in lang(child) for t in interleave(u, v))
            return acc
        body = lang(node.children[0])
        redo: frozenset = frozenset()
        for child in node.children[1:]:
            redo |= lang(child)
        result = set(body)
        frontier = set(body)
        while frontier:
            grown = set()
            for t in frontier:
                for r in redo:
                    for b in body:
                        candidate = t + r + b
                        if len(candidate) <= max_len and candidate not in result:
                            grown.add(candidate)
            result |= grown
            frontier = grown
        return frozenset(result)

    return lang(tree)


def sample_trace(tree: ProjectTree, rng, *, redo_chance: float = 0.35, max_redos: int = 3) -> tuple[str, ...]:
    """One random trace of the tree's language (``rng`` is a random.Random)."""
    if tree.is_leaf:
        return () if tree.is_silent else (tree.label,)
    if tree.op == SEQ:
        out: tuple[str, ...] = ()
        for child in tree.children:
            out += sample_trace(tree=child, rng=rng, redo_chance=redo_chance, max_redos=max_redos)
        return out
    if tree.op == XOR:
        child = rng.choice(tree.children)
        return sample_trace(child, rng, redo_chance=redo_chance, max_redos=max_redos)
    if tree.op == AND:
        parts = [list(sample_trace(c, rng, redo_chance=redo_chance, max_redos=max_redos))
                 for c in tree.children]
        merged: list[str] = []
        while any(parts):
            options = [i for i, p in enumerate(parts) if p]
            merged.append(parts[rng.choice(options)].pop(0))
        return tuple(merged)
    out = sample_trace(tree.children[0], rng, redo_chance=redo_chance, max_redos=max_redos)
    redos = 0
    while redos < max_redos and rng.random() < redo_chance:
        redo = rng.choice(tree.children[1:])
        out += sample_trace(redo, rng, redo_chance=redo_chance, max_redos=max_redos)
        out += sample_trace(tree.children[0], rng, redo_chance=redo_chance, max_redos=max_redos)
        redos += 1
    return out
