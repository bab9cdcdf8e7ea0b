"""Classical discrete random variables as commuting diagonal operators.

A variable taking value ``v_i`` with probability ``a_i / L`` becomes a
diagonal ``L x L`` matrix in which ``v_i`` appears ``a_i`` times, so that
``tau = tr / L`` reproduces the law exactly.  Independent variables sit on
distinct tensor slots.  Event probabilities are computed by exact rational
enumeration of the sample space; values and thresholds are converted to
:class:`fractions.Fraction`, so every comparison in the oracle is exact.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .config import SuiteConfig
from .errors import BadAlpha, BadThreshold, CapExceeded, HypothesisFailed, NonUniformizable
from .independence import TensorFamily, tensor_family
from .maximal_inequalities import (
    SumSequence,
    levy_skorohod_verify,
    levy_verify,
    ottaviani_verify,
    strong_symmetrization_verify,
)
from .operator_core import HermitianOperator
from .report import Bound, HypothesisCheck, InequalityReport, InvariantCheck

MAX_DENOMINATOR = 64
ENUM_CAP = 1_000_000
AGREEMENT_TOL = 1e-12


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(float(v))


@dataclass(frozen=True)
class DiscreteVariable:
    """Finitely many ``(value, probability)`` outcomes with exact probabilities."""

    outcomes: tuple

    def __post_init__(self):
        outs = tuple((_frac(v), _frac(p)) for v, p in self.outcomes)
        if not outs:
            raise ValueError("a discrete variable needs at least one outcome")
        if any(p <= 0 for _, p in outs):
            raise ValueError("outcome probabilities must be positive")
        total = sum(p for _, p in outs)
        if abs(float(total) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {float(total)}, not 1")
        object.__setattr__(self, "outcomes", outs)

    @classmethod
    def from_triples(cls, triples) -> "DiscreteVariable":
        """Build from ``[value, prob_num, prob_den]`` triples."""
        return cls(tuple((v, Fraction(int(n), int(d))) for v, n, d in triples))

    @classmethod
    def rademacher(cls) -> "DiscreteVariable":
        return cls(((1, Fraction(1, 2)), (-1, Fraction(1, 2))))

    @classmethod
    def bernoulli(cls, p: Fraction = Fraction(1, 2)) -> "DiscreteVariable":
        p = Fraction(p)
        return cls(((1, p), (0, 1 - p)))

    @property
    def values(self) -> list[Fraction]:
        return [v for v, _ in self.outcomes]

    @property
    def probs(self) -> list[Fraction]:
        return [p for _, p in self.outcomes]

    def common_denominator(self) -> int:
        return math.lcm(*(p.denominator for p in self.probs))

    def probability(self, predicate: Callable[[Fraction], bool]) -> Fraction:
        return sum((p for v, p in self.outcomes if predicate(v)), Fraction(0))

    def is_symmetric(self) -> bool:
        law: dict[Fraction, Fraction] = {}
        for v, p in self.outcomes:
            law[v] = law.get(v, Fraction(0)) + p
        return all(law.get(-v, Fraction(0)) == p for v, p in law.items())

    def median(self) -> Fraction:
        """``sup{a : P(X >= a) >= 1/2}``: the largest value whose upper tail has mass >= 1/2."""
        for v in sorted(set(self.values), reverse=True):
            if self.probability(lambda u: u >= v) * 2 >= 1:
                return v
        raise AssertionError("unreachable: total mass is 1")

    def to_triples(self) -> list:
        return [[_json_value(v), p.numerator, p.denominator] for v, p in self.outcomes]


def _json_value(v: Fraction):
    return int(v) if v.denominator == 1 else float(v)


@dataclass(frozen=True)
class ClassicalInstance:
    variables: tuple
    enum_cap: int = ENUM_CAP

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("a classical instance needs at least one variable")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def sample_space_size(self) -> int:
        return math.prod(len(v.outcomes) for v in self.variables)

    def to_dict(self) -> dict:
        return {"variables": [{"outcomes": v.to_triples()} for v in self.variables]}

    @classmethod
    def from_dict(cls, data: dict, enum_cap: int = ENUM_CAP) -> "ClassicalInstance":
        return cls(
            tuple(DiscreteVariable.from_triples(v["outcomes"]) for v in data["variables"]),
            enum_cap,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ClassicalInstance":
        return cls.from_dict(json.loads(text))


def embed_variable(var: DiscreteVariable, max_denominator: int = MAX_DENOMINATOR) -> HermitianOperator:
    """Diagonal operator whose eigenvalue multiplicities reproduce the law of ``var``."""
    den = var.common_denominator()
    if den > max_denominator:
        raise NonUniformizable(
            f"common denominator {den} exceeds the uniformization cap {max_denominator}"
        )
    diag = []
    for v, p in var.outcomes:
        diag.extend([float(v)] * int(p * den))
    return HermitianOperator(np.diag(np.asarray(diag, dtype=complex)))


def diagonal_embedding(
    inst: ClassicalInstance,
    max_denominator: int = MAX_DENOMINATOR,
    dim_cap: int = 4096,
) -> TensorFamily:
    """Place each variable's diagonal embedding on its own tensor slot."""
    ops = [embed_variable(v, max_denominator) for v in inst.variables]
    return tensor_family(ops, dim_cap)


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise CapExceeded(f"sample space of size {size} exceeds enumeration cap {cap}")


def outcomes(inst: ClassicalInstance):
    """Iterate ``(values, probability)`` over the product sample space."""
    _check_cap(inst.sample_space_size, inst.enum_cap)
    for combo in itertools.product(*(v.outcomes for v in inst.variables)):
        prob = Fraction(1)
        for _, p in combo:
            prob *= p
        yield tuple(v for v, _ in combo), prob


def exact_event_probability(inst: ClassicalInstance, event: Callable[[tuple], bool]) -> Fraction:
    """``P(event)`` by exact enumeration; ``event`` receives the tuple of outcome values."""
    return sum((p for vals, p in outcomes(inst) if event(vals)), Fraction(0))


def partial_sums(values: Sequence[Fraction]) -> list[Fraction]:
    return list(itertools.accumulate(values))


@dataclass
class ClassicalOracle:
    """Exact probabilities of the classical events behind each witness projection."""

    values: dict = field(default_factory=dict)

    def __setitem__(self, key, value: Fraction):
        self.values[key] = Fraction(value)

    def __getitem__(self, key) -> Fraction:
        return self.values[key]

    def as_floats(self) -> dict:
        return {k: float(v) for k, v in self.values.items()}


def _first_passage_probs(inst, lam, prefix, transform, tail_pred, diff_pred=None):
    """Probabilities of ``P_k = {T(S_j) <= lam, j < k} ∩ {T(S_k) > lam}`` and friends.

    ``T`` maps the partial-sum vector to the sequence that plays the role of
    ``s_k`` (``S_k``, ``-S_k`` or ``|S_k|``).
    """
    n = inst.n
    oracle = ClassicalOracle()
    for k in range(n):
        oracle[f"{prefix}_{k + 1}"] = Fraction(0)
        oracle[f"r_{k + 1}"] = Fraction(0)
        oracle[f"tail_{k + 1}"] = Fraction(0)
        if diff_pred is not None:
            oracle[f"t_{k + 1}"] = Fraction(0)
            oracle[f"f_{k + 1}"] = Fraction(0)
    oracle["max"] = Fraction(0)
    for vals, prob in outcomes(inst):
        sums = partial_sums(vals)
        seq = transform(sums)
        first = None
        for k, s in enumerate(seq):
            crossed = tail_pred(s, lam)
            if crossed:
                oracle.values[f"tail_{k + 1}"] += prob
                if first is None:
                    first = k
            else:
                oracle.values[f"r_{k + 1}"] += prob
            if diff_pred is not None:
                t_ok = diff_pred(sums[-1] - sums[k])
                if t_ok:
                    oracle.values[f"t_{k + 1}"] += prob
                    if crossed:
                        oracle.values[f"f_{k + 1}"] += prob
        if first is not None:
            oracle.values[f"{prefix}_{first + 1}"] += prob
            oracle.values["max"] += prob
    return oracle


def _lhs_max(oracle, n) -> Fraction:
    return max(oracle[f"tail_{k + 1}"] / 2**k for k in range(n))


def _agreement(rep, pairs):
    worst = 0.0
    for label, nc, exact in pairs:
        dev = abs(float(nc) - float(exact))
        worst = max(worst, dev)
        rep.internal_invariants.append(InvariantCheck(f"agree: {label}", dev <= AGREEMENT_TOL, dev))
    rep.details["max_agreement_deviation"] = worst
    return worst


def _fraction_table(oracle: ClassicalOracle) -> dict:
    return {k: f"{v.numerator}/{v.denominator}" for k, v in oracle.values.items()}


def _symmetry_hypothesis(inst, rep, strict):
    bad = [k for k, v in enumerate(inst.variables) if not v.is_symmetric()]
    passed = not bad
    rep.hypothesis_checks.append(HypothesisCheck("variables symmetric", passed, float(len(bad)), f"asymmetric: {bad}" if bad else ""))
    if not passed and strict:
        raise HypothesisFailed("variables symmetric", float(len(bad)))


def classical_corollary_check(
    inst: ClassicalInstance,
    which: str,
    lam: float,
    alpha: float | None = None,
    cfg: SuiteConfig | None = None,
    *,
    strict: bool = True,
) -> InequalityReport:
    """Check a classical maximal inequality by exact enumeration and through the operator path.

    ``which`` is one of ``levy``, ``levy_abs``, ``levy_skorohod``,
    ``ottaviani`` or ``strong_symmetrization``.  The classical inequality is
    evaluated in rational arithmetic; the same instance is embedded as a
    diagonal tensor family and run through the matching verifier, and every
    witness trace is compared with the probability of its classical event.
    """
    cfg = cfg or SuiteConfig()
    if not (isinstance(lam, (int, float, Fraction)) and math.isfinite(float(lam))):
        raise BadThreshold(f"lambda must be finite, got {lam}")
    handlers = {
        "levy": _check_levy,
        "levy_abs": _check_levy,
        "levy_skorohod": _check_levy_skorohod,
        "ottaviani": _check_ottaviani,
        "strong_symmetrization": _check_strong,
    }
    if which not in handlers:
        raise ValueError(f"unknown corollary {which!r}; expected one of {sorted(handlers)}")
    rep = InequalityReport(name=f"classical_{which}", parameters={"lambda": float(lam), "n": inst.n})
    if alpha is not None:
        rep.parameters["alpha"] = float(alpha)
    handlers[which](inst, which, _frac(lam), alpha, cfg, rep, strict)
    return rep.finalize(cfg.tol_check)


def _nc_cfg(cfg, family):
    # the operator path must not trip over its own caps for a legal classical instance
    from dataclasses import replace

    return replace(cfg, dim_cap=max(cfg.dim_cap, family.product_dim**2))


def _check_levy(inst, which, lam, alpha, cfg, rep, strict):
    if lam <= 0:
        raise BadThreshold(f"lambda must be positive, got {float(lam)}")
    _symmetry_hypothesis(inst, rep, strict)
    n = inst.n
    gt = lambda s, t: s > t  # noqa: E731
    nonneg = lambda d: d >= 0  # noqa: E731
    up = _first_passage_probs(inst, lam, "p", lambda s: s, gt, nonneg)
    down = _first_passage_probs(inst, lam, "q", lambda s: [-v for v in s], gt, lambda d: -d >= 0)
    absolute = _first_passage_probs(inst, lam, "a", lambda s: [abs(v) for v in s], gt)
    tail_n = up[f"tail_{n}"]
    abs_tail_n = absolute[f"tail_{n}"]

    family = diagonal_embedding(inst)
    nc = levy_verify(family, float(lam), _nc_cfg(cfg, family), strict=False)
    rep.details["operator_report"] = nc.to_dict()
    rep.hypothesis_checks.extend(h for h in nc.hypothesis_checks if h.name != "summands symmetric")

    if which == "levy":
        lhs, rhs = up["max"], 2 * tail_n
        rep.bounds = [Bound("P(max S_k > lam) <= 2 P(S_n > lam)", float(lhs), float(rhs))]
    else:
        lhs, rhs = absolute["max"], 2 * abs_tail_n
        rep.bounds = [Bound("P(max |S_k| > lam) <= 2 P(|S_n| > lam)", float(lhs), float(rhs))]
    rep.lhs, rep.rhs = float(lhs), float(rhs)
    rep.details["exact_holds"] = bool(lhs <= rhs)
    rep.details["oracle"] = {"p": _fraction_table(up), "q": _fraction_table(down), "abs": _fraction_table(absolute)}

    wt = nc.witness_traces
    pairs = []
    for k in range(1, n + 1):
        pairs.append((f"tau(p_{k}) = P(P_{k})", wt[f"tau(p_k)_{k}"], up[f"p_{k}"]))
        pairs.append((f"tau(q_{k}) = P(Q_{k})", wt[f"tau(q_k)_{k}"], down[f"q_{k}"]))
        pairs.append((f"tau(r_{k})", wt[f"tau(r_k)[p]_{k}"], up[f"r_{k}"]))
        pairs.append((f"tau(t_{k})", wt[f"tau(t_k)[p]_{k}"], up[f"t_{k}"]))
        pairs.append((f"tau(f_{k})", wt[f"tau(f_k)[p]_{k}"], up[f"f_{k}"]))
    pairs.append(("tau(p) = P(max S_k > lam)", wt["tau(p)"], up["max"]))
    pairs.append(("tau(q) = P(max -S_k > lam)", wt["tau(q)"], down["max"]))
    pairs.append(("operator lhs = max_k 2^(1-k) P(S_k > lam)", nc.lhs, _lhs_max(up, n)))
    pairs.append(("operator rhs = 2 P(S_n > lam)", nc.rhs, 2 * tail_n))
    pairs.append(("|s_k| lhs", nc.details["abs_lhs"], _lhs_max(absolute, n)))
    _agreement(rep, pairs)
    # the operator bound tau(p) + tau(q) dominates the classical max |S_k| probability
    rep.bounds.append(Bound("P(max |S_k| > lam) <= tau(p) + tau(q)", float(absolute["max"]), wt["tau(p)"] + wt["tau(q)"]))


def _check_levy_skorohod(inst, which, lam, alpha, cfg, rep, strict):
    if lam <= 0:
        raise BadThreshold(f"lambda must be positive, got {float(lam)}")
    if alpha is None or not (0 < alpha < 1):
        raise BadAlpha(f"alpha must lie in (0, 1), got {alpha}")
    a = _frac(alpha)
    n = inst.n
    shift = -(1 - a) * lam
    up = _first_passage_probs(inst, lam, "p", lambda s: s, lambda s, t: s > t, lambda d: d >= shift)
    target = exact_event_probability(inst, lambda vals: sum(vals) > a * lam)
    min_t = min(up[f"t_{k}"] for k in range(1, n + 1))
    lhs = up["max"] * min_t
    rep.bounds = [Bound("P(max S_k > lam) min_k P(S_n - S_k >= -(1-alpha)lam) <= P(S_n > alpha lam)", float(lhs), float(target))]
    rep.lhs, rep.rhs = float(lhs), float(target)
    rep.details["exact_holds"] = bool(lhs <= target)
    rep.details["oracle"] = {"p": _fraction_table(up), "target": str(target)}

    family = diagonal_embedding(inst)
    nc = levy_skorohod_verify(family, float(lam), float(alpha), _nc_cfg(cfg, family), strict=False)
    rep.details["operator_report"] = nc.to_dict()
    rep.hypothesis_checks.extend(nc.hypothesis_checks)
    wt = nc.witness_traces
    pairs = [(f"tau(p_{k})", wt[f"tau(p_k)_{k}"], up[f"p_{k}"]) for k in range(1, n + 1)]
    pairs += [(f"tau(t_{k})", wt[f"tau(t_k)_{k}"], up[f"t_{k}"]) for k in range(1, n + 1)]
    pairs += [(f"tau(f_{k})", wt[f"tau(f_k)_{k}"], up[f"f_{k}"]) for k in range(1, n + 1)]
    pairs.append(("tau(p) = P(max S_k > lam)", wt["tau(p)"], up["max"]))
    pairs.append(("operator lhs", nc.lhs, _lhs_max(up, n)))
    if not nc.vacuous:
        pairs.append(("operator rhs", nc.rhs, target / min_t))
    _agreement(rep, pairs)


def _check_ottaviani(inst, which, lam, alpha, cfg, rep, strict):
    if lam <= 0:
        raise BadThreshold(f"lambda must be positive, got {float(lam)}")
    n = inst.n
    half = lam / 2
    up = _first_passage_probs(
        inst, 2 * lam, "p", lambda s: [abs(v) for v in s], lambda s, t: s > t, lambda d: abs(d) <= half
    )
    target = exact_event_probability(inst, lambda vals: abs(sum(vals)) > half)
    min_t = min(up[f"t_{k}"] for k in range(1, n + 1))
    lhs = up["max"] * min_t
    rep.bounds = [Bound("P(max |S_k| > 2lam) min_k P(|S_n - S_k| <= lam/2) <= P(|S_n| > lam/2)", float(lhs), float(target))]
    rep.lhs, rep.rhs = float(lhs), float(target)
    rep.details["exact_holds"] = bool(lhs <= target)
    rep.details["oracle"] = {"p": _fraction_table(up), "target": str(target)}

    family = diagonal_embedding(inst)
    nc = ottaviani_verify(family, float(lam), _nc_cfg(cfg, family), strict=False)
    rep.details["operator_report"] = nc.to_dict()
    rep.hypothesis_checks.extend(nc.hypothesis_checks)
    wt = nc.witness_traces
    pairs = [(f"tau(p_{k})", wt[f"tau(p_k)_{k}"], up[f"p_{k}"]) for k in range(1, n + 1)]
    pairs += [(f"tau(t_{k})", wt[f"tau(t_k)_{k}"], up[f"t_{k}"]) for k in range(1, n + 1)]
    pairs.append(("tau(p) = P(max |S_k| > 2lam)", wt["tau(p)"], up["max"]))
    pairs.append(("operator lhs", nc.lhs, _lhs_max(up, n)))
    if not nc.vacuous:
        pairs.append(("operator rhs", nc.rhs, target / min_t))
    _agreement(rep, pairs)


def _check_strong(inst, which, lam, alpha, cfg, rep, strict):
    n = inst.n
    meds = [v.median() for v in inst.variables]
    _check_cap(inst.sample_space_size**2, inst.enum_cap)
    lhs = Fraction(0)
    first_hits = [Fraction(0)] * n
    for vals, prob in outcomes(inst):
        z = [v - m for v, m in zip(vals, meds)]
        for k, zk in enumerate(z):
            if zk >= lam:
                first_hits[k] += prob
                lhs += prob
                break
    rhs_event = Fraction(0)
    q_probs = [Fraction(0)] * n
    pairs_space = list(outcomes(inst))
    for vals, p in pairs_space:
        for vals2, p2 in pairs_space:
            hits = [a - b >= lam for a, b in zip(vals, vals2)]
            for k, h in enumerate(hits):
                if h:
                    q_probs[k] += p * p2
            if any(hits):
                rhs_event += p * p2
    rep.bounds = [Bound("P(max (X_k - med X_k) >= lam) <= 2 P(max (X_k - X_k') >= lam)", float(lhs), float(2 * rhs_event))]
    rep.lhs, rep.rhs = float(lhs), float(2 * rhs_event)
    rep.details["exact_holds"] = bool(lhs <= 2 * rhs_event)
    rep.details["classical_medians"] = [str(m) for m in meds]

    family = diagonal_embedding(inst)
    nc = strong_symmetrization_verify(list(family.members), float(lam), _nc_cfg(cfg, family))
    rep.details["operator_report"] = nc.to_dict()
    rep.hypothesis_checks.append(HypothesisCheck("self-adjoint summands", True, 0.0))
    wt = nc.witness_traces
    pairs = [(f"tau(p_{k})", wt[f"tau(p_k)_{k}"], first_hits[k - 1]) for k in range(1, n + 1)]
    pairs += [(f"tau(q_{k})", wt[f"tau(q_k)_{k}"], q_probs[k - 1]) for k in range(1, n + 1)]
    pairs.append(("tau(p)", wt["tau(p)"], lhs))
    pairs.append(("tau(q_1 v ... v q_n)", wt["tau(Q)"], rhs_event))
    pairs.append(("medians", max(abs(a - float(b)) for a, b in zip(nc.details["medians"], meds)), 0))
    _agreement(rep, pairs)
