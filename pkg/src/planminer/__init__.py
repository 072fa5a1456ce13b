"""planminer: mine project event logs into process models and schedules.

The pipeline runs log -> directly-follows graph -> project tree -> timed
workflow net (optionally frequency-filtered and annotated with decision
rules) -> variant plans scheduled with the critical path method.
"""

from .dfg import DirectlyFollowsGraph, build_dfg, dfg_to_dot, reaches
from .decisions import (DecisionInstance, DecisionPoint, DecisionRule, RuleConfig,
                        annotate_rules, extract_instances, find_decision_points,
                        learn_rules, learn_rules_for_point, rule_text)
from .errors import (ChoiceError, GeneratorSpecError, LogParseError, ModelError,
                     PlanMinerError, ScheduleError)
from .log import (EventLog, EventRecord, LogStats, Trace, log_from_traces,
                  log_stats, parse_event_log, serialize_event_log)
from .miner import Cut, cut_satisfies, find_cut, mine_tree, split_log
from .petri import (PetriNet, StructuralReport, check_structure, filter_model,
                    net_to_dot, replay_trace, tree_to_petri)
from .planner import (DurationModel, RelaxationReport, Schedule, VariantChoice,
                      VariantPlan, critical_path, decode_variant, enumerate_variants,
                      estimate_durations, relaxation_report)
from .synthlog import SyntheticLogSpec, generate_synthetic_log, generating_tree
from .tree import (ProjectTree, enumerate_language, format_tree, leaf, loop, par,
                   seq, silent, tree_from_json, tree_to_json, xor)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
