"""End-to-end helpers shared by the CLI and the HTTP service."""

from __future__ import annotations

from fractions import Fraction

from .decisions import (DecisionRule, annotate_rules, find_decision_points,
                        learn_rules_for_point)
from .errors import ModelError
from .log import EventLog, parse_event_log
from .miner import mine_tree
from .petri import PetriNet, StructuralReport, filter_model, tree_to_petri
from .planner import DurationModel, estimate_durations, parse_estimator
from .tree import ProjectTree


def mine_from_csv(text: str) -> tuple[EventLog, ProjectTree]:
    log = parse_event_log(text)
    return log, mine_tree(log)


def filtered_net(tree: ProjectTree, gamma, case_count: int,
                 durations: DurationModel | None = None) -> tuple[PetriNet, StructuralReport]:
    net = tree_to_petri(tree, durations.durations if durations else None)
    return filter_model(net, gamma, case_count)


def rules_for(net: PetriNet, log: EventLog) -> list[DecisionRule]:
    """Best-effort rules for every decision point of the net.

    Points whose cases expose no usable features (or that no case reaches)
    are skipped rather than failing the whole report.
    """
    rules = []
    for point in find_decision_points(net):
        try:
            rules.append(learn_rules_for_point(net, log, point))
        except ModelError:
            continue
    return rules


def annotated_net(net: PetriNet, log: EventLog) -> tuple[PetriNet, list[DecisionRule]]:
    rules = rules_for(net, log)
    return annotate_rules(net, rules), rules


def duration_model(log: EventLog, estimator: str) -> DurationModel:
    kind, project = parse_estimator(estimator)
    return estimate_durations(log, kind, project)
