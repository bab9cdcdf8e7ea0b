"""Plans, the suite runner and run-directory output."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..classical_reduction import ClassicalInstance, diagonal_embedding
from ..config import SuiteConfig
from ..errors import HypothesisFailed, QProbError
from ..independence import TensorFamily, weak_full_independence_test
from ..maximal_inequalities import (
    SumSequence,
    levy_skorohod_verify,
    levy_verify,
    lp_symmetrization_verify,
    ottaviani_verify,
    strong_symmetrization_verify,
    weak_symmetrization_verify,
)
from ..operator_core import HermitianOperator, absolute
from ..report import InequalityReport
from ..trace_measure import chebyshev_check, median_report
from .generators import GeneratorSpec, generate, lambda_sweep
from .io import save_json

VERIFIERS = (
    "levy",
    "ottaviani",
    "levy-skorohod",
    "symmetrize-strong",
    "symmetrize-weak",
    "symmetrize-lp",
    "chebyshev",
    "median",
)
SEQUENCE_VERIFIERS = ("levy", "ottaviani", "levy-skorohod")


@dataclass(frozen=True)
class PlanEntry:
    """One generated instance and the verifier to run on it.

    Parameter values that are lists are expanded into one run per value;
    ``"lambda": "sweep"`` expands into the thresholds of :func:`lambda_sweep`.
    """

    generator: GeneratorSpec
    verifier: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verifier not in VERIFIERS:
            raise ValueError(f"unknown verifier {self.verifier!r}; expected one of {VERIFIERS}")

    def to_dict(self) -> dict:
        return {"generator": self.generator.to_dict(), "verifier": self.verifier, "parameters": dict(self.parameters)}

    @classmethod
    def from_dict(cls, d: dict) -> "PlanEntry":
        return cls(GeneratorSpec.from_dict(d["generator"]), d["verifier"], dict(d.get("parameters", {})))


def as_sequence(inst) -> SumSequence | TensorFamily:
    if isinstance(inst, (SumSequence, TensorFamily)):
        return inst
    if isinstance(inst, ClassicalInstance):
        return diagonal_embedding(inst)
    return SumSequence.from_operators([inst])


def as_operator(inst) -> HermitianOperator:
    """Single variable for the one-operator verifiers: the total sum of a sequence."""
    if isinstance(inst, HermitianOperator):
        return inst
    seq = as_sequence(inst)
    sums = seq.partial_sums() if isinstance(seq, TensorFamily) else seq.partial_sums
    return sums[-1]


def members(inst) -> list:
    seq = as_sequence(inst)
    return list(seq.members if isinstance(seq, TensorFamily) else seq.xs)


def run_verifier(
    name: str,
    inst,
    params: dict,
    cfg: SuiteConfig,
    *,
    independence=None,
    strict: bool = True,
) -> InequalityReport:
    """Dispatch by CLI verifier name."""
    lam = params.get("lambda")
    alpha = params.get("alpha")
    p = params.get("p")
    if name == "levy":
        return levy_verify(as_sequence(inst), lam, cfg, strict=strict, independence=independence)
    if name == "ottaviani":
        return ottaviani_verify(as_sequence(inst), lam, cfg, strict=strict, independence=independence)
    if name == "levy-skorohod":
        return levy_skorohod_verify(as_sequence(inst), lam, alpha, cfg, strict=strict, independence=independence)
    if name == "symmetrize-strong":
        return strong_symmetrization_verify(members(inst), lam, cfg)
    if name == "symmetrize-weak":
        return weak_symmetrization_verify(as_operator(inst), lam, alpha if alpha is not None else 0.0, cfg)
    if name == "symmetrize-lp":
        return lp_symmetrization_verify(as_operator(inst), alpha if alpha is not None else 0.0, p if p is not None else 2.0, cfg)
    if name == "chebyshev":
        return chebyshev_check(as_operator(inst), lam, p if p is not None else 2.0, cfg.tol_check)
    if name == "median":
        return median_report(as_operator(inst), p if p is not None else 2.0, cfg.tol_check)
    raise ValueError(f"unknown verifier {name!r}")


def _expand(params: dict, sweep_basis) -> list[dict]:
    keys, choices = [], []
    for k, v in params.items():
        if k == "lambda" and v == "sweep":
            v = lambda_sweep(absolute(sweep_basis))
        keys.append(k)
        choices.append(v if isinstance(v, list) else [v])
    return [dict(zip(keys, combo)) for combo in itertools.product(*choices)]


def _independence_for(entry, inst, cfg):
    if entry.verifier not in SEQUENCE_VERIFIERS:
        return None
    seq = as_sequence(inst)
    xs = seq.members if isinstance(seq, TensorFamily) else seq.xs
    if len(xs) < 2:
        return None
    return weak_full_independence_test(list(xs), cfg.max_word_len, cfg.n_words, cfg.seed, cfg.tol_indep)


def _status(rep: InequalityReport) -> str:
    if not rep.holds or not rep.invariants_ok:
        return "fail"
    return "vacuous" if rep.vacuous else "pass"


@dataclass
class SuiteReport:
    config: dict
    records: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {"total": len(self.records), "pass": 0, "vacuous": 0, "fail": 0, "hypothesis_failed": 0, "error": 0}
        for r in self.records:
            counts[r["status"]] += 1
        counts["exit_code"] = self.exit_code
        return counts

    @property
    def exit_code(self) -> int:
        statuses = {r["status"] for r in self.records}
        if "fail" in statuses:
            return 1
        if statuses & {"hypothesis_failed", "error"}:
            return 2
        return 0

    def worst_slack(self) -> dict:
        worst: dict[str, float] = {}
        for r in self.records:
            rep = r.get("report")
            if rep is None or rep["vacuous"]:
                continue
            s = rep["slack"]
            s = float(s) if isinstance(s, str) else s
            worst[r["verifier"]] = min(worst.get(r["verifier"], math.inf), s)
        return worst

    def to_dict(self) -> dict:
        records = sorted(self.records, key=lambda r: r["id"])
        return {
            "config": self.config,
            "summary": self.summary,
            "worst_slack": {k: (v if math.isfinite(v) else "inf") for k, v in sorted(self.worst_slack().items())},
            "records": records,
        }


def run_suite(config: SuiteConfig, plan: list[PlanEntry]) -> SuiteReport:
    """Run every plan entry; instance errors are recorded, never raised."""
    suite = SuiteReport(config=config.to_dict())
    for i, entry in enumerate(plan):
        base = {"verifier": entry.verifier, "generator": entry.generator.to_dict()}
        try:
            inst = generate(entry.generator, config.dim_cap)
            independence = _independence_for(entry, inst, config)
            runs = _expand(entry.parameters, as_operator(inst))
        except (QProbError, ValueError) as exc:
            suite.records.append({"id": f"{i:05d}-00", **base, "parameters": dict(entry.parameters), "status": "error", "error": f"{type(exc).__name__}: {exc}"})
            continue
        for j, params in enumerate(runs):
            rec = {"id": f"{i:05d}-{j:02d}", **base, "parameters": params}
            try:
                rep = run_verifier(entry.verifier, inst, params, config, independence=independence)
                rec["status"] = _status(rep)
                rec["report"] = rep.to_dict()
            except HypothesisFailed as exc:
                rec["status"] = "hypothesis_failed"
                rec["error"] = {"hypothesis": exc.hypothesis, "deviation": exc.deviation}
            except (QProbError, ValueError) as exc:
                rec["status"] = "error"
                rec["error"] = f"{type(exc).__name__}: {exc}"
            suite.records.append(rec)
    return suite


def _family_dims(rng, max_product: int, max_n: int = 4, choices=(2, 3)) -> tuple:
    n = int(rng.integers(1, max_n + 1))
    dims = [int(rng.choice(choices)) for _ in range(n)]
    while math.prod(dims) > max_product:
        dims.pop()
    return tuple(dims)


def default_plan(config: SuiteConfig, per_verifier: int = 200) -> list[PlanEntry]:
    """Tensor-symmetric families for every theorem verifier.

    Lévy, Ottaviani and Lévy–Skorohod get ``n <= 4`` factors of dimension 2
    or 3 (product dimension up to 81).  The symmetrization verifiers work in
    the doubled space, so their families are capped at product dimension 16
    (doubled dimension 256, the default cap).
    """
    plan = []
    doubled_max = int(math.isqrt(config.dim_cap))
    for v_index, verifier in enumerate(VERIFIERS[:6]):
        rng = np.random.default_rng([config.seed, v_index])
        max_product = 81 if verifier in SEQUENCE_VERIFIERS else min(16, doubled_max)
        for _ in range(per_verifier):
            dims = _family_dims(rng, max_product)
            spec = GeneratorSpec("tensor_symmetric_family", dims, len(dims), int(rng.integers(2**31)))
            params: dict = {}
            if verifier != "symmetrize-lp":
                params["lambda"] = "sweep"
            if verifier in ("levy-skorohod", "symmetrize-weak", "symmetrize-lp"):
                lo = 0.1 if verifier == "levy-skorohod" else -1.0
                params["alpha"] = round(float(rng.uniform(lo, 0.9)), 6)
            if verifier == "symmetrize-lp":
                params["p"] = [1.0, 2.0, 3.0]
            plan.append(PlanEntry(spec, verifier, params))
    return plan


def plan_from_config(data: dict, config: SuiteConfig) -> list[PlanEntry]:
    plan = data.get("plan", "default")
    if plan == "default":
        return default_plan(config, int(data.get("instances_per_verifier", 200)))
    return [PlanEntry.from_dict(e) for e in plan]


def write_suite(report: SuiteReport, out_dir, seed: int, timestamp: str | None = None) -> Path:
    """Write ``suite.json`` and one file per record under ``<out_dir>/run-seed<seed>-<timestamp>``."""
    stamp = timestamp or time.strftime("%Y%m%dT%H%M%S")
    run_dir = Path(out_dir) / f"run-seed{seed}-{stamp}"
    data = report.to_dict()
    save_json(data, run_dir / "suite.json")
    for rec in data["records"]:
        save_json(rec, run_dir / "instances" / f"{rec['id']}.json")
    return run_dir
