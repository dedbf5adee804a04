"""Check reports: the common result record for all property checks."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def _jsonable(value):
    """Coerce numpy scalars/arrays and tuples into plain JSON types."""
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


@dataclass
class CheckReport:
    """Outcome of one property check.

    worst_margin is the signed slack of the tightest trial (negative means
    the asserted inequality was violated by that amount).  passed is
    worst_margin >= -tolerance.
    """

    name: str
    passed: bool
    trials: int
    worst_margin: float
    witness: dict = field(default_factory=dict)
    tolerance: float = 1e-9

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "trials": int(self.trials),
            "worst_margin": float(self.worst_margin),
            "witness": _jsonable(self.witness),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def merge_reports(a: CheckReport, b: CheckReport) -> CheckReport:
    """Combine two reports of the same check by keeping the tightest trial.

    Associative and order-independent, so partial results from parallel
    workers can be folded in any order.
    """
    if a.name != b.name:
        raise ValueError(f"cannot merge reports {a.name!r} and {b.name!r}")
    worst, witness = ((a.worst_margin, a.witness) if a.worst_margin <= b.worst_margin
                      else (b.worst_margin, b.witness))
    tol = min(a.tolerance, b.tolerance)
    return CheckReport(
        name=a.name,
        passed=worst >= -tol,
        trials=a.trials + b.trials,
        worst_margin=worst,
        witness=witness,
        tolerance=tol,
    )
