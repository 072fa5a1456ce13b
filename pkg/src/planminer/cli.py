"""Command-line front end over the mining and planning pipeline.

Every subcommand reads CSV (or a previously exported tree JSON), writes the
requested artifact to stdout and keeps diagnostics on stderr.  Outputs are
deterministic: identical inputs and flags produce byte-identical bytes, so
the commands compose through files (``mine`` > tree.json, then ``plan
--tree tree.json`` equals the one-shot ``plan``).

Exit codes: 0 success, 1 data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .decisions import rule_text, rule_to_dict
from .errors import PlanMinerError
from .log import serialize_event_log
from .petri import net_to_dict, net_to_dot
from .pipeline import annotated_net, duration_model, filtered_net, mine_from_csv, rules_for
from .planner import (VariantChoice, critical_path, decode_variant,
                      enumerate_variants, relaxation_report, relaxation_to_dict,
                      schedule_to_dict, schedule_text, variant_weight)
from .synthlog import SyntheticLogSpec, generate_synthetic_log, parse_duration_ranges
from .tree import format_tree, tree_from_json, tree_to_dict, tree_to_dot


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _dump(data) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2)


def _gamma(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("gamma must lie in [0, 1]")
    return value


def _assignments(pairs: list[str], what: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for pair in pairs or []:
        name, sep, index = pair.partition("=")
        if not sep or not name or not index.lstrip("-").isdigit():
            raise PlanMinerError(f"bad {what} {pair!r}, expected name=index")
        out[name] = int(index)
    return out


def _load_inputs(args) -> tuple:
    """(log, tree) from --in and/or --tree; either may be None."""
    log = tree = None
    if getattr(args, "infile", None):
        if getattr(args, "tree", None):
            log, _ = mine_from_csv(_read_text(args.infile))
            tree = tree_from_json(_read_text(args.tree))
        else:
            log, tree = mine_from_csv(_read_text(args.infile))
    elif getattr(args, "tree", None):
        tree = tree_from_json(_read_text(args.tree))
    else:
        raise PlanMinerError("need --in CSV or --tree JSON input")
    return log, tree


# ---------------------------------------------------------------------------
# subcommands

def cmd_mine(args) -> str:
    _log, tree = mine_from_csv(_read_text(args.infile))
    if args.format == "text":
        return format_tree(tree)
    if args.format == "dot":
        return tree_to_dot(tree)
    return _dump(tree_to_dict(tree))


def cmd_filter(args) -> str:
    log, tree = _load_inputs(args)
    cases = len(log.traces) if log is not None else tree.freq
    net, report = filtered_net(tree, args.gamma, cases)
    rules = []
    if args.rules:
        if log is None:
            raise PlanMinerError("--rules needs the event log (--in)")
        net, rules = annotated_net(net, log)
    if args.format == "dot":
        return net_to_dot(net)
    payload = net_to_dict(net)
    payload.update({
        "gamma": str(args.gamma),
        "workflow_net": report.is_workflow_net,
        "sound": report.sound,
        "dead_transitions": list(report.dead_transitions),
        "disconnected": list(report.disconnected_nodes),
    })
    if args.rules:
        payload["rules"] = [rule_to_dict(r) for r in rules]
    if args.format == "text":
        lines = [
            f"places: {len(net.places)}  transitions: {len(net.transitions)}  "
            f"arcs: {len(net.arcs)}",
            f"workflow net: {report.is_workflow_net}  sound: {report.sound}",
        ]
        if report.dead_transitions:
            lines.append("dead transitions: " + ", ".join(report.dead_transitions))
        if report.disconnected_nodes:
            lines.append("disconnected: " + ", ".join(report.disconnected_nodes))
        lines += [rule_text(r) for r in rules]
        return "\n".join(lines)
    return _dump(payload)


def cmd_rules(args) -> str:
    log, tree = _load_inputs(args)
    if log is None:
        raise PlanMinerError("rules need the event log (--in)")
    net, _report = filtered_net(tree, args.gamma, len(log.traces))
    if args.format == "dot":
        annotated, _rules = annotated_net(net, log)
        return net_to_dot(annotated)
    rules = rules_for(net, log)
    if args.format == "text":
        return "\n\n".join(rule_text(r) for r in rules) if rules else "no decision rules"
    return _dump({"rules": [rule_to_dict(r) for r in rules]})


def cmd_variants(args) -> str:
    _log, tree = _load_inputs(args)
    variants = enumerate_variants(tree, args.limit)
    rows = [
        {"selections": dict(v.selections), "unrolls": dict(v.unrolls),
         "weight": variant_weight(tree, v)}
        for v in variants
    ]
    if args.format == "text":
        lines = []
        for row in rows:
            picks = ", ".join(f"{k}={v}" for k, v in sorted(row["selections"].items())) or "(no choices)"
            lines.append(f"{picks}  weight={row['weight']}")
        return "\n".join(lines)
    return _dump({"variants": rows})


def _plan_pieces(args):
    log, tree = _load_inputs(args)
    if log is None:
        raise PlanMinerError("scheduling needs the event log (--in) for durations")
    choice = VariantChoice(selections=_assignments(args.choose, "choice"),
                           unrolls=_assignments(args.unroll, "unroll"))
    plan = decode_variant(tree, choice)
    if args.gamma:
        net, _report = filtered_net(tree, args.gamma, len(log.traces))
        surviving = {t.label for t in net.transitions if t.label is not None}
        missing = sorted({a.label for a in plan.activities} - surviving)
        if missing:
            raise PlanMinerError(
                f"choice uses activities filtered out at gamma={args.gamma}: "
                + ", ".join(missing))
    durations = duration_model(log, args.durations)
    schedule = critical_path(plan, durations)
    baseline = args.baseline.split(",") if getattr(args, "baseline", None) \
        else [a.label for a in plan.activities]
    report = relaxation_report(baseline, plan, durations)
    return choice, schedule, report


def cmd_plan(args) -> str:
    choice, schedule, report = _plan_pieces(args)
    if args.format == "text":
        return schedule_text(schedule) + "\n" + _relaxation_text(report)
    return _dump({
        "choice": {"selections": dict(choice.selections),
                   "unrolls": dict(choice.unrolls)},
        "schedule": schedule_to_dict(schedule),
        "relaxation": relaxation_to_dict(report),
    })


def cmd_report(args) -> str:
    _choice, _schedule, report = _plan_pieces(args)
    if args.format == "text":
        return _relaxation_text(report)
    return _dump(relaxation_to_dict(report))


def _relaxation_text(report) -> str:
    data = relaxation_to_dict(report)
    lines = [
        f"serial baseline: {data['baseline_makespan']} h",
        f"plan makespan:   {data['plan_makespan']} h",
        f"gain:            {data['gain']} h ({data['percent_gain']}%)",
    ]
    slack = {k: v for k, v in data["slack"].items() if v}
    if slack:
        lines.append("slack: " + ", ".join(f"{k}={v}" for k, v in sorted(slack.items())))
    return "\n".join(lines)


def cmd_gen(args) -> str:
    weights = tuple(int(w) for w in args.weights.split(","))
    ranges = parse_duration_ranges(args.durations) if args.durations else {}
    spec = SyntheticLogSpec(
        activity_count=args.activities,
        parallel_width=args.width,
        variant_weights=weights,
        seed=args.seed,
        duration_ranges=ranges,
    )
    return serialize_event_log(generate_synthetic_log(spec)).rstrip("\n")


def cmd_serve(args) -> None:
    import uvicorn

    from .service import DEFAULT_PORT, create_app

    port = args.port if args.port is not None else int(os.environ.get("PLANMINER_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")


# ---------------------------------------------------------------------------
# parser

def _add_input(sub, tree_input: bool = True) -> None:
    sub.add_argument("--in", dest="infile", metavar="CSV", help="event log CSV ('-' for stdin)")
    if tree_input:
        sub.add_argument("--tree", metavar="JSON", help="previously mined tree JSON")


def _add_format(sub, *choices: str) -> None:
    sub.add_argument("--format", choices=choices or ("json", "dot", "text"),
                     default="json", help="output format (default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planminer",
        description="Mine project trees from event logs and schedule plan variants.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("mine", help="mine a project tree from an event log")
    p.add_argument("--in", dest="infile", metavar="CSV", required=True,
                   help="event log CSV ('-' for stdin)")
    _add_format(p)
    p.set_defaults(handler=cmd_mine)

    p = commands.add_parser("filter", help="translate the tree to a net and drop rare arcs")
    _add_input(p)
    p.add_argument("--gamma", type=_gamma, default=Fraction(0),
                   help="case-share threshold in [0,1] (default 0)")
    p.add_argument("--rules", action="store_true",
                   help="also learn decision rules and annotate the arcs")
    _add_format(p)
    p.set_defaults(handler=cmd_filter)

    p = commands.add_parser("rules", help="learn decision rules at the net's choice places")
    _add_input(p)
    p.add_argument("--gamma", type=_gamma, default=Fraction(0))
    _add_format(p)
    p.set_defaults(handler=cmd_rules)

    p = commands.add_parser("variants", help="enumerate plan variants with case weights")
    _add_input(p)
    p.add_argument("--limit", type=int, default=None, help="return at most this many")
    _add_format(p, "json", "text")
    p.set_defaults(handler=cmd_variants)

    for name, handler, blurb in (
            ("plan", cmd_plan, "decode a variant choice and schedule it"),
            ("report", cmd_report, "relaxation gain of a variant vs serial execution")):
        p = commands.add_parser(name, help=blurb)
        _add_input(p)
        p.add_argument("--choose", action="append", metavar="NODE=INDEX",
                       help="pick a branch at an exclusive choice (repeatable)")
        p.add_argument("--unroll", action="append", metavar="LOOP=COUNT",
                       help="redo count for a loop (repeatable, default 0)")
        p.add_argument("--durations", default="mean",
                       help="estimator: mean | median | p90 | fixed:PROJECT (default mean)")
        p.add_argument("--gamma", type=_gamma, default=Fraction(0),
                       help="reject choices whose activities are filtered out")
        p.add_argument("--baseline", metavar="A,B,...",
                       help="serial baseline activities (default: the plan's own)")
        _add_format(p, "json", "text")
        p.set_defaults(handler=handler)

    p = commands.add_parser("gen", help="generate a synthetic event log CSV")
    p.add_argument("--activities", type=int, default=5)
    p.add_argument("--width", type=int, default=2,
                   help="activities in the parallel block (1 = fully serial)")
    p.add_argument("--weights", required=True, metavar="N,N,...",
                   help="exact per-variant case counts, lexicographic variant order")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--durations", metavar="a=LO:HI,b=N,...",
                   help="per-activity duration ranges in hours")
    p.set_defaults(handler=cmd_gen)

    p = commands.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None,
                   help="listen port (default $PLANMINER_PORT or 8675)")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        output = args.handler(args)
    except PlanMinerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if output is not None:
        print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
