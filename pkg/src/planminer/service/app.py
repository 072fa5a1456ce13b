"""HTTP/JSON service exposing the mining and planning pipeline.

Each uploaded log lives in an in-memory session.  The noise threshold γ is a
query parameter on model requests (cheap to explore, idempotent); the variant
choice is session state.  A choice made at one γ is rejected with 409 once a
later γ has filtered away activities it relies on.
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from .. import __version__
from ..decisions import DecisionRule, rule_to_dict
from ..errors import ChoiceError, LogParseError, PlanMinerError, ScheduleError
from ..log import EventLog, log_stats, parse_event_log, stats_to_dict
from ..miner import mine_tree
from ..petri import (PetriNet, StructuralReport, filter_model, net_to_dict,
                     net_to_dot, tree_to_petri)
from ..pipeline import annotated_net, duration_model
from ..planner import (DurationModel, Schedule, VariantChoice, critical_path,
                       decode_variant, enumerate_variants, relaxation_report,
                       relaxation_to_dict, schedule_to_dict, variant_weight)
from ..tree import XOR, ProjectTree, indexed_nodes, subtree_at
from .schemas import (ChoiceRequest, ChoiceResponse, ModelResponse,
                      RulesResponse, SessionCreated, VariantsResponse)

DEFAULT_PORT = 8675


@dataclass
class SessionState:
    """Everything the service remembers about one uploaded log."""

    id: str
    log: EventLog
    tree: ProjectTree
    base_net: PetriNet
    estimator: str
    durations: DurationModel
    gamma: Fraction = Fraction(0)
    choice: VariantChoice | None = None
    schedule: Schedule | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    models: dict[Fraction, tuple[PetriNet, StructuralReport, tuple[DecisionRule, ...]]] = \
        field(default_factory=dict, repr=False)

    def model_at(self, gamma: Fraction):
        """Filtered + rule-annotated net for γ, cached (pure per γ)."""
        cached = self.models.get(gamma)
        if cached is None:
            filtered, report = filter_model(self.base_net, gamma, len(self.log.traces))
            annotated, rules = annotated_net(filtered, self.log)
            cached = (annotated, report, tuple(rules))
            self.models[gamma] = cached
        return cached


def _variant_total(tree: ProjectTree) -> int:
    total = 1
    for node_id, path in indexed_nodes(tree).items():
        if node_id.startswith(XOR):
            total *= len(subtree_at(tree, path).children)
    return total


def _model_payload(gamma: Fraction, net: PetriNet, report: StructuralReport,
                   rules: tuple[DecisionRule, ...]) -> dict:
    payload = net_to_dict(net)
    payload.update({
        "gamma": float(gamma),
        "workflow_net": report.is_workflow_net,
        "sound": report.sound,
        "dead_transitions": list(report.dead_transitions),
        "disconnected": list(report.disconnected_nodes),
        "rules": [rule_to_dict(r) for r in rules],
    })
    return payload


def create_app() -> FastAPI:
    app = FastAPI(title="planminer", version=__version__)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    sessions: dict[str, SessionState] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> SessionState:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions", response_model=SessionCreated, status_code=201)
    async def create_session(request: Request,
                             durations: str = Query(default="mean")) -> dict:
        body = (await request.body()).decode("utf-8", errors="replace")
        try:
            log = parse_event_log(body)
            tree = mine_tree(log)
        except LogParseError as exc:
            raise HTTPException(status_code=400, detail={
                "message": "could not parse event log",
                "problems": [{"row": row, "message": msg} for row, msg in exc.problems],
            }) from exc
        except PlanMinerError as exc:
            raise HTTPException(status_code=400, detail={
                "message": str(exc), "problems": [],
            }) from exc
        try:
            model = duration_model(log, durations)
        except PlanMinerError as exc:
            raise HTTPException(status_code=422,
                                detail=f"invalid duration estimator: {exc}") from exc
        session = SessionState(
            id=uuid.uuid4().hex,
            log=log,
            tree=tree,
            base_net=tree_to_petri(tree, model.durations),
            estimator=durations,
            durations=model,
        )
        with registry_lock:
            sessions[session.id] = session
        return {"session_id": session.id, "estimator": durations,
                "stats": stats_to_dict(log_stats(log))}

    @app.get("/sessions/{session_id}/model", response_model=ModelResponse)
    def get_model(session_id: str,
                  gamma: Decimal = Query(default=Decimal(0), ge=0, le=1)) -> dict:
        session = get_session(session_id)
        value = Fraction(gamma)
        with session.lock:
            net, report, rules = session.model_at(value)
            session.gamma = value
        return _model_payload(value, net, report, rules)

    @app.get("/sessions/{session_id}/rules", response_model=RulesResponse)
    def get_rules(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            gamma = session.gamma
            _net, _report, rules = session.model_at(gamma)
        return {"gamma": float(gamma), "rules": [rule_to_dict(r) for r in rules]}

    @app.get("/sessions/{session_id}/variants", response_model=VariantsResponse)
    def get_variants(session_id: str,
                     limit: int | None = Query(default=None, ge=1)) -> dict:
        session = get_session(session_id)
        chosen = enumerate_variants(session.tree, limit)
        return {"total": _variant_total(session.tree), "variants": [
            {"selections": dict(v.selections), "unrolls": dict(v.unrolls),
             "weight": variant_weight(session.tree, v)}
            for v in chosen
        ]}

    @app.post("/sessions/{session_id}/choice", response_model=ChoiceResponse)
    def post_choice(session_id: str, body: ChoiceRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            choice = VariantChoice(selections=dict(body.selections),
                                   unrolls=dict(body.unrolls))
            try:
                plan = decode_variant(session.tree, choice)
            except ChoiceError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            net, _report, _rules = session.model_at(session.gamma)
            surviving = {t.label for t in net.transitions if t.label is not None}
            missing = sorted({a.label for a in plan.activities} - surviving)
            if missing:
                raise HTTPException(
                    status_code=409,
                    detail=("choice uses activities filtered out at "
                            f"gamma={float(session.gamma)}: {', '.join(missing)}"))
            try:
                schedule = critical_path(plan, session.durations)
                baseline = [a.label for a in plan.activities]
                report = relaxation_report(baseline, plan, session.durations)
            except ScheduleError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            session.choice = choice
            session.schedule = schedule
        return {
            "choice": {"selections": dict(choice.selections),
                       "unrolls": dict(choice.unrolls)},
            "schedule": schedule_to_dict(schedule),
            "relaxation": relaxation_to_dict(report),
        }

    @app.get("/sessions/{session_id}/export/dot", response_class=PlainTextResponse)
    def export_dot(session_id: str) -> str:
        session = get_session(session_id)
        with session.lock:
            net, _report, _rules = session.model_at(session.gamma)
        return net_to_dot(net)

    return app


app = create_app()
