"""End-to-end checks pinning the toolkit's headline behaviours.

Each test pins one behaviour outright: exact golden artifacts for the
reference four-project log and its hundred-case synthetic cousin, exact
closed-form schedule figures (rational arithmetic, zero tolerance), and
randomized suites backed by brute-force oracles.
"""
import random
import time
from fractions import Fraction

from planminer.dfg import build_dfg
from planminer.log import END, START, log_from_traces
from planminer.miner import mine_tree
from planminer.petri import filter_model, net_to_dict, replay_trace, tree_to_petri
from planminer.planner import (DurationModel, PlanActivity, VariantChoice,
                               VariantPlan, critical_path, decode_variant,
                               relaxation_report)
from planminer.tree import (ProjectTree, enumerate_language, leaf, loop, par,
                            sample_trace, seq, silent, xor)

PROJECT1 = DurationModel("fixed:1", {
    "a": Fraction(2), "b": Fraction(4), "c": Fraction(7, 2), "e": Fraction(5)})


def test_mines_the_reference_log_exactly_and_fast(table1):
    started = time.perf_counter()
    tree = mine_tree(table1)
    elapsed = time.perf_counter() - started
    expected = seq(
        leaf("a", freq=4),
        xor(par(leaf("b", freq=2), leaf("c", freq=2), freq=2),
            leaf("d", freq=2), freq=4),
        leaf("e", freq=4),
        freq=4)
    assert tree == expected
    assert elapsed < 1.0


def test_reference_dfg_arc_frequencies(table1):
    assert dict(build_dfg(table1).arcs) == {
        (START, "a"): 4, ("a", "b"): 1, ("a", "c"): 1, ("a", "d"): 2,
        ("b", "c"): 1, ("c", "b"): 1, ("b", "e"): 1, ("c", "e"): 1,
        ("d", "e"): 2, ("e", END): 4,
    }


def test_filtering_the_hundred_case_log(log100):
    net = tree_to_petri(mine_tree(log100))

    identity, _ = filter_model(net, 0, 100)
    assert net_to_dict(identity) == net_to_dict(net)

    filtered, report = filter_model(net, "0.05", 100)
    assert sorted(t.label for t in filtered.transitions if t.label) == list("abce")
    assert sum(1 for t in filtered.transitions if t.label is None) == 2
    assert len(filtered.arcs) == len(net.arcs) - 2
    assert report.is_workflow_net and report.sound is True
    assert replay_trace(filtered, ("a", "b", "c", "e"))
    assert replay_trace(filtered, ("a", "c", "b", "e"))
    assert not replay_trace(filtered, ("a", "d", "e"))

    # raising γ only ever shrinks the model (11-step sweep)
    previous_arcs = previous_transitions = None
    for i in range(11):
        step, _ = filter_model(net, Fraction(i, 10), 100)
        arcs = set(step.arcs)
        transitions = {t.id for t in step.transitions}
        if previous_arcs is not None:
            assert arcs <= previous_arcs
            assert transitions <= previous_transitions
        previous_arcs, previous_transitions = arcs, transitions


def test_reference_decision_rule(table1):
    from planminer.decisions import find_decision_points, learn_rules_for_point, rule_text

    net = tree_to_petri(mine_tree(table1))
    points = find_decision_points(net)
    assert len(points) == 1
    rule = learn_rules_for_point(net, table1, points[0])
    assert rule.accuracy == Fraction(1)
    assert rule_text(rule) == (
        "IF client = IZ THEN d (support=2, acc=1.00)\n"
        "IF client != IZ THEN {b,c} (support=2, acc=1.00)")
    assert rule.predict({"client": "IZ"}) == "d"
    assert rule.predict({"client": "TA"}) == "{b,c}"


def test_cpm_closed_forms_are_exact(golden_tree):
    serial = VariantPlan(
        tuple(PlanActivity(l, l) for l in "abce"),
        frozenset({("_start", "a"), ("a", "b"), ("b", "c"), ("c", "e"), ("e", "_end")}))
    assert critical_path(serial, PROJECT1).makespan == Fraction(29, 2)

    relaxed = decode_variant(golden_tree, VariantChoice({"xor1": 0}))
    schedule = critical_path(relaxed, PROJECT1)
    assert schedule.makespan == Fraction(11)                       # p_a + max{p_b,p_c} + p_e
    assert schedule.entries["c"].slack == Fraction(1, 2)           # p_b - p_c
    assert schedule.critical_path == ("a", "b", "e")

    report = relaxation_report(("a", "b", "c", "e"), relaxed, PROJECT1)
    assert report.baseline_makespan == Fraction(29, 2)
    assert report.gain == Fraction(7, 2)                           # min{p_b, p_c}
    assert report.gain == min(PROJECT1.durations["b"], PROJECT1.durations["c"])


def _random_plan(rng: random.Random):
    n = rng.randint(1, 12)
    labels = [f"t{i:02d}" for i in range(n)]
    arcs = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.25:
                arcs.add((labels[i], labels[j]))
    targets = {dst for _, dst in arcs}
    sources = {src for src, _ in arcs}
    for label in labels:
        if label not in targets:
            arcs.add(("_start", label))
        if label not in sources:
            arcs.add((label, "_end"))
    durations = {l: Fraction(rng.randint(0, 48), 4) for l in labels}
    plan = VariantPlan(tuple(PlanActivity(l, l) for l in labels), frozenset(arcs))
    return plan, DurationModel("fixed", durations)


def _max_path_sum(plan: VariantPlan, durations: DurationModel) -> Fraction:
    succs = plan.successors()
    value = {a.id: durations.get(a.label) for a in plan.activities}
    best: dict[str, Fraction] = {}

    def walk(node: str) -> Fraction:
        if node in best:
            return best[node]
        tail = max((walk(n) for n in succs[node]), default=Fraction(0))
        best[node] = tail + value.get(node, Fraction(0))
        return best[node]

    return walk("_start")


def test_cpm_against_brute_force_oracle():
    rng = random.Random(424242)
    started = time.perf_counter()
    for _ in range(200):
        plan, durations = _random_plan(rng)
        schedule = critical_path(plan, durations)
        assert schedule.makespan == _max_path_sum(plan, durations)
        assert all(entry.slack >= 0 for entry in schedule.entries.values())
        # the reported critical path is a real start-to-end path, every step
        # tight, whose durations sum to the makespan
        path = schedule.critical_path
        assert sum(durations.get(l) for l in path) == schedule.makespan
        assert all(schedule.entries[l].slack == 0 for l in path)
        hops = [("_start", path[0])] + list(zip(path, path[1:])) + [(path[-1], "_end")]
        assert all(hop in plan.arcs for hop in hops)
    assert time.perf_counter() - started < 10.0


def _random_fitting_tree(rng: random.Random, alphabet: str) -> ProjectTree:
    def build(depth: int) -> ProjectTree:
        if depth >= 3 or rng.random() < 0.4:
            if rng.random() < 0.15:
                return silent()
            return leaf(rng.choice(alphabet))
        op = rng.choice(("seq", "xor", "and", "loop"))
        children = tuple(build(depth + 1) for _ in range(rng.randint(2, 3)))
        return ProjectTree(op, children=children)

    return build(0)


def test_mined_nets_fit_their_logs():
    rng = random.Random(13)
    started = time.perf_counter()
    checked = 0
    while checked < 100:
        alphabet = "abcdef"[:rng.randint(1, 6)]
        tree = _random_fitting_tree(rng, alphabet)
        traces = [sample_trace(tree, rng, max_redos=2) for _ in range(rng.randint(1, 8))]
        log = log_from_traces(traces)
        mined = mine_tree(log)
        net = tree_to_petri(mined)
        for variant in log.variants:
            assert replay_trace(net, variant), (tree, traces, variant)
        checked += 1
    assert time.perf_counter() - started < 30.0


ALL_OPS = ("seq", "xor", "and", "loop")


def _random_duplicate_free_tree(rng: random.Random, labels: list[str],
                                allowed: tuple[str, ...] = ALL_OPS) -> ProjectTree:
    """Random tree over distinct visible labels, no silent steps.

    Loops never sit below a parallel node and a loop's first child is never
    itself parallel: two such trees can share a directly-follows footprint
    while having different languages, so nothing footprint-based can
    separate them and rediscovery is out of reach by construction.
    """
    if len(labels) == 1:
        return leaf(labels[0])
    op = rng.choice(allowed)
    k = rng.randint(2, min(3, len(labels)))
    order = labels[:]
    rng.shuffle(order)
    cuts = sorted(rng.sample(range(1, len(order)), k - 1))
    chunks = [order[i:j] for i, j in zip([0] + cuts, cuts + [len(order)])]
    below = allowed if op != "and" else tuple(o for o in allowed if o != "loop")
    children = []
    for index, chunk in enumerate(chunks):
        child_allowed = below
        if op == "loop" and index == 0:
            child_allowed = tuple(o for o in below if o != "and")
        children.append(_random_duplicate_free_tree(rng, chunk, child_allowed))
    return ProjectTree(op, children=tuple(children))


def test_rediscovery_from_complete_logs():
    rng = random.Random(31)
    for _ in range(40):
        size = rng.randint(1, 5)
        labels = list("abcde"[:size])
        tree = _random_duplicate_free_tree(rng, labels)
        language = enumerate_language(tree, 10)
        log = log_from_traces(sorted(language))
        mined = mine_tree(log)
        assert enumerate_language(mined, 10) == language, (tree, mined)


def test_parallel_relaxation_gain_scales():
    for n in range(2, 9):
        labels = [f"s{i}" for i in range(1, n + 1)]
        durations = {l: Fraction(4 * n - 2 * i, 4) for i, l in enumerate(labels, start=1)}
        tree = par(*[leaf(l) for l in labels])
        plan = decode_variant(tree, VariantChoice())
        model = DurationModel("fixed", durations)
        baseline = sorted(labels, key=lambda l: durations[l], reverse=True)
        report = relaxation_report(baseline, plan, model)
        assert report.plan_makespan == durations[labels[0]]
        assert report.gain == sum((durations[l] for l in baseline[1:]), Fraction(0))
