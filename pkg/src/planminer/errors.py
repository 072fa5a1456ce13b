"""Exception types shared across the toolkit."""

from __future__ import annotations


class PlanMinerError(Exception):
    """Base class for every error raised by planminer on bad input or state."""


class LogParseError(PlanMinerError):
    """CSV input could not be turned into an event log.

    Carries one ``(row, message)`` pair per offending physical CSV row so
    callers can report all problems at once instead of failing row by row.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [(0, problems)]
        self.problems = list(problems)
        lines = "; ".join(f"row {row}: {msg}" if row else msg for row, msg in self.problems)
        super().__init__(lines)


class ModelError(PlanMinerError):
    """A process model (graph, tree or net) violates a structural contract."""


class ChoiceError(PlanMinerError):
    """A variant choice does not address the tree it is applied to."""


class ScheduleError(PlanMinerError):
    """A plan cannot be scheduled (cycle, missing duration, ...)."""


class GeneratorSpecError(PlanMinerError):
    """A synthetic-log specification is internally inconsistent."""
