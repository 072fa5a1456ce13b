"""Request/response bodies for the HTTP service."""
from __future__ import annotations

from pydantic import BaseModel, Field


class VariantCount(BaseModel):
    activities: list[str]
    count: int


class StatsModel(BaseModel):
    cases: int
    variants: list[VariantCount]


class SessionCreated(BaseModel):
    session_id: str
    estimator: str
    stats: StatsModel


class TransitionModel(BaseModel):
    id: str
    label: str | None
    freq: int
    duration: float


class ArcModel(BaseModel):
    source: str
    target: str
    freq: int
    rule: str | None = None


class XorBindingModel(BaseModel):
    place: str
    node: str
    branches: dict[str, int]


class RuleModel(BaseModel):
    point: str
    accuracy: float
    alternatives: list[str]
    text: str
    tree: dict


class ModelResponse(BaseModel):
    gamma: float
    places: list[str]
    transitions: list[TransitionModel]
    arcs: list[ArcModel]
    source: str
    sink: str
    xor_bindings: list[XorBindingModel]
    workflow_net: bool
    sound: bool | None
    dead_transitions: list[str]
    disconnected: list[str]
    rules: list[RuleModel]


class RulesResponse(BaseModel):
    gamma: float
    rules: list[RuleModel]


class ChoiceRequest(BaseModel):
    selections: dict[str, int] = Field(default_factory=dict)
    unrolls: dict[str, int] = Field(default_factory=dict)


class ScheduleActivityModel(BaseModel):
    id: str
    label: str
    duration: float
    early_start: float
    early_finish: float
    late_start: float
    late_finish: float
    slack: float


class ScheduleModel(BaseModel):
    makespan: float
    critical_path: list[str]
    activities: list[ScheduleActivityModel]


class RelaxationModel(BaseModel):
    baseline_makespan: float
    plan_makespan: float
    gain: float
    percent_gain: float
    slack: dict[str, float]


class ChoiceResponse(BaseModel):
    choice: ChoiceRequest
    schedule: ScheduleModel
    relaxation: RelaxationModel


class VariantModel(BaseModel):
    selections: dict[str, int]
    unrolls: dict[str, int]
    weight: int


class VariantsResponse(BaseModel):
    total: int
    variants: list[VariantModel]
