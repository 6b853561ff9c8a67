"""Solve reports shared by the realizers and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field

REALIZED = "Realized"
CONDITION_UNMET = "ConditionUnmet"
METHOD_FAILURE = "MethodFailure"
INFEASIBLE = "Infeasible"
SCALE_EXCEEDED = "ScaleExceeded"
INVALID_INPUT = "InvalidInput"

OUTCOMES = (REALIZED, CONDITION_UNMET, METHOD_FAILURE, INFEASIBLE,
            SCALE_EXCEEDED, INVALID_INPUT)


@dataclass
class SolveReport:
    method: str
    outcome: str = REALIZED
    conditions: dict = field(default_factory=dict)
    liftings: int = 0
    max_path_len: int = 0
    wall_ms: float = 0.0
    detail: str = ""

    def lines(self) -> list[str]:
        out = [f"method: {self.method}", f"outcome: {self.outcome}"]
        for key in sorted(self.conditions):
            out.append(f"cond.{key}: {self.conditions[key]}")
        out.append(f"liftings: {self.liftings}")
        out.append(f"max_path_len: {self.max_path_len}")
        out.append(f"millis: {self.wall_ms:.3f}")
        if self.detail:
            out.append(f"detail: {self.detail}")
        return out


class InternalError(AssertionError):
    """A solver invariant failed; indicates an implementation bug, not an
    infeasible instance."""
