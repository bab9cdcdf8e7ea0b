"""Verifier output: :class:`InequalityReport` and its JSON form.

A report records every bound a verifier checked.  ``lhs``/``rhs`` are the
outer terms of the primary chain and ``slack`` is the smallest ``rhs - lhs``
over every individual link in ``bounds``, so a chain ``a <= b <= c`` is
reported as ``lhs=a, rhs=c`` with the tightest link as slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class HypothesisCheck:
    name: str
    passed: bool
    deviation: float
    note: str = ""


@dataclass
class InvariantCheck:
    label: str
    passed: bool
    value: float = 0.0


@dataclass
class Bound:
    label: str
    lhs: float
    rhs: float
    vacuous: bool = False

    @property
    def slack(self) -> float:
        if self.vacuous:
            return math.inf
        return self.rhs - self.lhs


@dataclass
class InequalityReport:
    name: str
    hypothesis_checks: list[HypothesisCheck] = field(default_factory=list)
    lhs: float = 0.0
    rhs: float = 0.0
    witness_traces: dict[str, float] = field(default_factory=dict)
    holds: bool = True
    slack: float = math.inf
    vacuous: bool = False
    internal_invariants: list[InvariantCheck] = field(default_factory=list)
    bounds: list[Bound] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def hypotheses_ok(self) -> bool:
        return all(h.passed for h in self.hypothesis_checks)

    @property
    def invariants_ok(self) -> bool:
        return all(c.passed for c in self.internal_invariants)

    def finalize(self, tol_check: float) -> "InequalityReport":
        """Derive ``slack``, ``holds`` and ``vacuous`` from ``bounds``."""
        live = [b for b in self.bounds if not b.vacuous]
        self.vacuous = any(b.vacuous for b in self.bounds)
        self.slack = min((b.slack for b in live), default=math.inf)
        self.holds = self.slack >= -tol_check
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameters": _clean(self.parameters),
            "hypothesis_checks": [
                {"name": h.name, "passed": bool(h.passed), "deviation": _num(h.deviation), "note": h.note}
                for h in self.hypothesis_checks
            ],
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "holds": bool(self.holds),
            "slack": _num(self.slack),
            "vacuous": bool(self.vacuous),
            "bounds": [
                {"label": b.label, "lhs": _num(b.lhs), "rhs": _num(b.rhs), "vacuous": bool(b.vacuous)}
                for b in self.bounds
            ],
            "witness_traces": {k: _num(v) for k, v in self.witness_traces.items()},
            "internal_invariants": [
                {"label": c.label, "passed": bool(c.passed), "value": _num(c.value)}
                for c in self.internal_invariants
            ],
            "warnings": list(self.warnings),
            "details": _clean(self.details),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        return cls(
            name=d["name"],
            parameters=_unclean(d.get("parameters", {})),
            hypothesis_checks=[
                HypothesisCheck(h["name"], h["passed"], _unnum(h["deviation"]), h.get("note", ""))
                for h in d.get("hypothesis_checks", [])
            ],
            lhs=_unnum(d["lhs"]),
            rhs=_unnum(d["rhs"]),
            holds=d["holds"],
            slack=_unnum(d["slack"]),
            vacuous=d["vacuous"],
            bounds=[
                Bound(b["label"], _unnum(b["lhs"]), _unnum(b["rhs"]), b["vacuous"])
                for b in d.get("bounds", [])
            ],
            witness_traces={k: _unnum(v) for k, v in d.get("witness_traces", {}).items()},
            internal_invariants=[
                InvariantCheck(c["label"], c["passed"], _unnum(c["value"]))
                for c in d.get("internal_invariants", [])
            ],
            warnings=list(d.get("warnings", [])),
            details=_unclean(d.get("details", {})),
        )


# JSON has no infinities; they travel as the strings "inf" / "-inf".
def _num(v):
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


def _unnum(v):
    if isinstance(v, str):
        return float(v)
    return v


def _clean(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    try:
        return _num(obj)
    except (TypeError, ValueError):
        return str(obj)


def _unclean(obj):
    if isinstance(obj, dict):
        return {k: _unclean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_unclean(v) for v in obj]
    if obj in ("inf", "-inf", "nan"):
        return float(obj)
    return obj
