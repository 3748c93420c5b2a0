"""Inequality-scan reports.

A report never hides a hypothesis failure: checks whose preconditions do not
hold come back with verdict "vacuous" and an explicit reason, so a vacuous
run can never be mistaken for a pass.
"""

import math
from dataclasses import dataclass, field

__all__ = ["PASS", "VIOLATION", "VACUOUS", "ConcavityReport"]

PASS = "pass"
VIOLATION = "violation"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class ConcavityReport:
    """Outcome of one inequality scan.

    worst_deficit is (left side) - (right side) at the worst sample; negative
    beyond tolerance certifies a violation.  witness identifies where the
    worst deficit occurred (lambda and/or t values plus any measured sides).
    """

    verdict: str
    worst_deficit: float
    witness: dict | None
    samples_checked: int
    tolerance: float
    reason: str | None = None
    grids: dict | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in (PASS, VIOLATION, VACUOUS):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict != VACUOUS:
            is_violation = self.worst_deficit < -self.tolerance
            if is_violation != (self.verdict == VIOLATION):
                raise ValueError("verdict inconsistent with worst_deficit and tolerance")
            if self.samples_checked > 0 and self.witness is None:
                raise ValueError("witness required when samples were checked")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @classmethod
    def decide(cls, worst_deficit: float, tolerance: float, witness: dict | None,
               samples_checked: int, *, grids: dict | None = None, extras: dict | None = None,
               certified: bool = True) -> "ConcavityReport":
        """Build a report whose verdict follows from deficit vs tolerance.

        certified=False demotes a negative deficit to a pass (used when a
        violation did not survive tolerance tightening); the demotion is
        recorded in extras.
        """
        extras = dict(extras or {})
        if worst_deficit < -tolerance and not certified:
            extras["uncertified_negative_deficit"] = worst_deficit
            worst_deficit = -tolerance  # clamp: not evidence of a violation
        verdict = VIOLATION if worst_deficit < -tolerance else PASS
        return cls(verdict, worst_deficit, witness, samples_checked, tolerance,
                   grids=grids, extras=extras)

    @classmethod
    def vacuous(cls, reason: str, *, tolerance: float = 0.0, extras: dict | None = None) -> "ConcavityReport":
        return cls(VACUOUS, math.nan, None, 0, tolerance, reason=reason,
                   extras=dict(extras or {}))

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "worst_deficit": None if math.isnan(self.worst_deficit) else self.worst_deficit,
            "witness": self.witness,
            "samples": self.samples_checked,
            "tolerance": self.tolerance,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.grids is not None:
            out["grids"] = self.grids
        if self.extras:
            out["extras"] = self.extras
        return out
