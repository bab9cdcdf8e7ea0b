"""Verifiers for the noncommutative maximal inequalities.

Every verifier builds the witness projections of the corresponding proof,
evaluates both sides of each displayed bound, and checks the intermediate
facts the proof relies on (orthogonality of the pieces, sub-projection
relations, the induction estimate).  Results come back as
:class:`~qprob.report.InequalityReport` values.

Notation used in labels: ``e(B; y)`` is the spectral projection of ``y`` on
``B``, ``s_k`` are partial sums, ``tau`` is the normalized trace.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import SuiteConfig
from .errors import (
    BadAlpha,
    BadExponent,
    BadThreshold,
    DegenerateAngleWarning,
    DimMismatch,
    DimOverflow,
    EmptyFamily,
    HypothesisFailed,
)
from .independence import (
    IndependenceReport,
    TensorFamily,
    double,
    weak_full_independence_test,
)
from .operator_core import (
    BorelInterval,
    HermitianOperator,
    Projection,
    absolute,
    commutator_norm,
    embed_projection,
    identity,
    lp_power,
    make_hermitian,
    spectral_projection,
    spectral_weight,
)
from .projection_lattice import (
    join_all,
    meet,
    orthogonality_deviation,
    subprojection_deviation,
)
from .report import Bound, HypothesisCheck, InequalityReport, InvariantCheck
from .trace_measure import median, symmetry_deviation

INVARIANT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SumSequence:
    """Summands ``x_1..x_n`` sharing one space, with partial sums ``s_k``."""

    xs: tuple
    partial_sums: tuple

    @classmethod
    def from_operators(cls, xs: Sequence) -> "SumSequence":
        if isinstance(xs, TensorFamily):
            xs = xs.members
        ops = [x if isinstance(x, HermitianOperator) else make_hermitian(x) for x in xs]
        if not ops:
            raise EmptyFamily("a sum sequence needs at least one summand")
        d = ops[0].dim
        if any(x.dim != d for x in ops):
            raise DimMismatch("all summands must act on the same space")
        sums, acc = [], None
        for x in ops:
            acc = x if acc is None else acc + x
            sums.append(acc)
        return cls(tuple(ops), tuple(sums))

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def dim(self) -> int:
        return self.xs[0].dim

    def commutation_deviation(self) -> float:
        """``max_k ||s_k s_n - s_n s_k||`` (max-entry norm)."""
        sn = self.partial_sums[-1]
        return max(commutator_norm(s, sn) for s in self.partial_sums)


@dataclass
class WitnessFamily:
    r: list
    p_parts: list
    t: list
    f: list
    p_total: Projection
    q_total: Projection | None = None
    q_parts: list = field(default_factory=list)


def _as_sequence(seq) -> SumSequence:
    return seq if isinstance(seq, SumSequence) else SumSequence.from_operators(seq)


def _weight(x, interval, cfg):
    return spectral_weight(x, interval, cfg.eps_bnd)


def _proj(x, interval, cfg):
    return spectral_projection(x, interval, cfg.eps_bnd)


def _tau(p: Projection) -> float:
    return p.trace()


def _graded_check(name, dev, accept, warn_below, rep, strict, note=""):
    """Accept below ``accept``, accept with a warning below ``warn_below``, else fail."""
    passed = dev < warn_below
    if accept <= dev < warn_below:
        rep.warnings.append(f"{name}: deviation {dev:.3g} accepted with warning")
    rep.hypothesis_checks.append(HypothesisCheck(name, bool(passed), dev, note))
    if not passed and strict:
        raise HypothesisFailed(name, dev)


def _check_hypotheses(seq, cfg, rep, *, symmetric, strict, independence, family_is_tensor):
    if symmetric:
        worst = max(symmetry_deviation(x) for x in seq.xs)
        passed = worst <= cfg.tol_dist
        rep.hypothesis_checks.append(HypothesisCheck("summands symmetric", bool(passed), worst))
        if not passed and strict:
            raise HypothesisFailed("summands symmetric", worst)
    if seq.n >= 2:
        if independence is None:
            independence = weak_full_independence_test(
                list(seq.xs), cfg.max_word_len, cfg.n_words, cfg.seed, cfg.tol_indep
            )
        note = "tensor family" if family_is_tensor else "independence: sampled evidence only"
        _graded_check(
            "weak full independence",
            independence.max_deviation,
            cfg.tol_indep,
            cfg.tol_hyp_warn,
            rep,
            strict,
            note,
        )
    else:
        rep.hypothesis_checks.append(HypothesisCheck("weak full independence", True, 0.0, "n = 1"))
    _graded_check(
        "s_k s_n = s_n s_k", seq.commutation_deviation(), cfg.tol_comm, cfg.tol_hyp_warn, rep, strict
    )


def _first_passage(rs: list[Projection], cfg) -> tuple[list[Projection], list[Projection]]:
    """``p_k = (r_1 ∧ ... ∧ r_{k-1}) ∧ r_k^⊥`` and the running meets ``r_1 ∧ ... ∧ r_k``."""
    lat = cfg.lattice
    running = identity(rs[0].dim)
    parts, meets = [], []
    for r in rs:
        parts.append(meet(running, ~r, lat))
        running = meet(running, r, lat)
        meets.append(running)
    return parts, meets


def _sum_projections(parts: list[Projection]) -> Projection:
    total = sum(p.matrix for p in parts)
    return Projection((total + total.conj().T) / 2)


def _orthogonality_invariants(label, parts, rep):
    worst = 0.0
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            worst = max(worst, orthogonality_deviation(parts[i], parts[j]))
    rep.internal_invariants.append(InvariantCheck(f"{label}: pieces pairwise orthogonal", worst < INVARIANT_TOL, worst))
    total = _sum_projections(parts)
    m = total.matrix
    idem = float(np.linalg.norm(m @ m - m))
    rep.internal_invariants.append(InvariantCheck(f"{label}: sum of pieces is a projection", idem < INVARIANT_TOL, idem))
    return total


def _induction_invariants(label, p_total, rs, rep):
    """``tau(p^⊥) <= 1 - 2^(1-k) tau(r_k^⊥)`` for every ``k``."""
    tp_perp = 1.0 - _tau(p_total)
    worst = -math.inf
    for k, r in enumerate(rs, start=1):
        bound = 1.0 - 2.0 ** (1 - k) * (1.0 - _tau(r))
        worst = max(worst, tp_perp - bound)
    rep.internal_invariants.append(
        InvariantCheck(f"{label}: tau(p^perp) <= 1 - 2^(1-k) tau(r_k^perp)", worst <= INVARIANT_TOL, worst)
    )


def _subprojection_invariant(label, fs, target, rep):
    worst = max(subprojection_deviation(f, target) for f in fs)
    rep.internal_invariants.append(InvariantCheck(label, worst < INVARIANT_TOL, worst))


def _finish(rep, caught, cfg):
    for w in caught:
        if issubclass(w.category, DegenerateAngleWarning):
            rep.warnings.append(str(w.message))
    return rep.finalize(cfg.tol_check)


def _positive_lambda(lam):
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam > 0):
        raise BadThreshold(f"lambda must be a positive real, got {lam}")
    return float(lam)


def _record_parts(rep, prefix, parts):
    for k, p in enumerate(parts, start=1):
        rep.witness_traces[f"{prefix}_{k}"] = _tau(p)


def _levy_side(seq, lam, cfg, sign, rep, label):
    """Witnesses for one sign: ``r_k = e((-inf, lam]; ±s_k)``, ``t_k = e([0, inf); ±(s_n - s_k))``."""
    sums = [s if sign > 0 else -s for s in seq.partial_sums]
    sn = sums[-1]
    rs = [_proj(s, BorelInterval.below(lam, closed=True), cfg) for s in sums]
    ts = [_proj(sn - s, BorelInterval.above(0.0, closed=True), cfg) for s in sums]
    parts, _ = _first_passage(rs, cfg)
    fs = [meet(~r, t, cfg.lattice) for r, t in zip(rs, ts)]
    target = _proj(sn, BorelInterval.above(lam), cfg)
    total = _orthogonality_invariants(label, parts, rep)
    _induction_invariants(label, total, rs, rep)
    _subprojection_invariant(f"{label}: f_k <= e((lam, inf); s_n)", fs, target, rep)

    tails = [_weight(s, BorelInterval.above(lam), cfg) for s in sums]
    tp = _tau(total)
    nontrivial = (max(tails) == 0.0) or tp > 0.0
    rep.internal_invariants.append(InvariantCheck(f"{label}: nonzero when some tail is nonzero", bool(nontrivial), tp))

    sum_pt = sum(float(np.trace(p.matrix @ t.matrix).real) / seq.dim for p, t in zip(parts, ts))
    sum_p_t = sum(_tau(p) * _tau(t) for p, t in zip(parts, ts))
    min_t = min(_tau(t) for t in ts)
    tail_n = _weight(sn, BorelInterval.above(lam), cfg)
    rep.internal_invariants.append(
        InvariantCheck(f"{label}: sum tau(p_k t_k) <= tau(e((lam,inf); s_n))", sum_pt <= tail_n + INVARIANT_TOL, tail_n - sum_pt)
    )
    rep.internal_invariants.append(InvariantCheck(f"{label}: tau(t_k) >= 1/2", min_t >= 0.5 - INVARIANT_TOL, min_t))

    _record_parts(rep, f"tau({label}_k)", parts)
    _record_parts(rep, f"tau(r_k)[{label}]", rs)
    _record_parts(rep, f"tau(t_k)[{label}]", ts)
    _record_parts(rep, f"tau(f_k)[{label}]", fs)
    rep.witness_traces[f"sum tau({label}_k t_k)"] = sum_pt
    rep.witness_traces[f"sum tau({label}_k)tau(t_k)"] = sum_p_t
    lhs = max(2.0 ** (-k) * tl for k, tl in enumerate(tails))
    return WitnessFamily(rs, parts, ts, fs, total), tp, lhs, tail_n


def levy_verify(
    seq,
    lam: float,
    cfg: SuiteConfig | None = None,
    *,
    strict: bool = True,
    independence: IndependenceReport | None = None,
) -> InequalityReport:
    """Noncommutative Lévy inequality for symmetric summands.

    Checks ``max_k 2^(1-k) tau(e((lam,inf); s_k)) <= tau(p) <= 2 tau(e((lam,inf); s_n))``
    and the two-sided version with ``|s_k|`` and ``tau(p) + tau(q)``, where
    ``p`` (``q``) is the sum of the first-passage pieces built from ``s_k``
    (``-s_k``).

    With ``strict=False`` failed hypotheses are recorded instead of raised and
    the witness construction still runs.
    """
    cfg = cfg or SuiteConfig()
    lam = _positive_lambda(lam)
    is_tensor = isinstance(seq, TensorFamily)
    seq = _as_sequence(seq)
    rep = InequalityReport(name="levy", parameters={"lambda": lam, "n": seq.n, "dim": seq.dim})
    _check_hypotheses(seq, cfg, rep, symmetric=True, strict=strict, independence=independence, family_is_tensor=is_tensor)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAngleWarning)
        wp, tp, lhs_p, tail_n = _levy_side(seq, lam, cfg, +1, rep, "p")
        wq, tq, lhs_q, tail_neg_n = _levy_side(seq, lam, cfg, -1, rep, "q")
    wp.q_total, wp.q_parts = wq.p_total, wq.p_parts

    abs_tails = [_weight(absolute(s), BorelInterval.above(lam), cfg) for s in seq.partial_sums]
    lhs_abs = max(2.0 ** (-k) * tl for k, tl in enumerate(abs_tails))
    abs_tail_n = abs_tails[-1]
    rep.bounds = [
        Bound("max_k 2^(1-k) tau(e((lam,inf); s_k)) <= tau(p)", lhs_p, tp),
        Bound("tau(p) <= 2 tau(e((lam,inf); s_n))", tp, 2 * tail_n),
        Bound("max_k 2^(1-k) tau(e((lam,inf); -s_k)) <= tau(q)", lhs_q, tq),
        Bound("tau(q) <= 2 tau(e((lam,inf); -s_n))", tq, 2 * tail_neg_n),
        Bound("max_k 2^(1-k) tau(e((lam,inf); |s_k|)) <= tau(p) + tau(q)", lhs_abs, tp + tq),
        Bound("tau(p) + tau(q) <= 2 tau(e((lam,inf); |s_n|))", tp + tq, 2 * abs_tail_n),
    ]
    rep.lhs, rep.rhs = lhs_p, 2 * tail_n
    rep.witness_traces.update({"tau(p)": tp, "tau(q)": tq})
    # the proof writes the |s_k| maximum as a sum of two maxima; only <= holds in general
    rep.details["abs_lhs"] = lhs_abs
    rep.details["abs_lhs_decomposition"] = lhs_p + lhs_q
    rep.details["witness"] = {"p_parts": len(wp.p_parts), "q_parts": len(wp.q_parts)}
    return _finish(rep, caught, cfg)


def _one_sided_construction(seq, cfg, rep, rs, ts, target, label):
    parts, _ = _first_passage(rs, cfg)
    fs = [meet(t, ~r, cfg.lattice) for r, t in zip(rs, ts)]
    total = _orthogonality_invariants(label, parts, rep)
    _induction_invariants(label, total, rs, rep)
    worst_comm = max(commutator_norm(r, t) for r, t in zip(rs, ts))
    rep.internal_invariants.append(InvariantCheck("t_k r_k = r_k t_k", worst_comm < INVARIANT_TOL * 10, worst_comm))
    _record_parts(rep, "tau(p_k)", parts)
    _record_parts(rep, "tau(r_k)", rs)
    _record_parts(rep, "tau(t_k)", ts)
    _record_parts(rep, "tau(f_k)", fs)
    sum_pt = sum(float(np.trace(p.matrix @ t.matrix).real) / seq.dim for p, t in zip(parts, ts))
    rep.witness_traces["sum tau(p_k t_k)"] = sum_pt
    rep.witness_traces["sum tau(p_k)tau(t_k)"] = sum(_tau(p) * _tau(t) for p, t in zip(parts, ts))
    return parts, fs, total, sum_pt


def ottaviani_verify(
    seq,
    lam: float,
    cfg: SuiteConfig | None = None,
    *,
    strict: bool = True,
    independence: IndependenceReport | None = None,
) -> InequalityReport:
    """Noncommutative Ottaviani inequality.

    ``max_k 2^(1-k) tau(e((2 lam, inf); |s_k|)) <= tau(p) <= M tau(e((lam/2, inf); |s_n|))``
    with ``M = 1 / min_k tau(e((-inf, lam/2]; |s_n - s_k|))`` and ``1/0 = inf``.
    An infinite ``M`` makes the right bound vacuous.
    """
    cfg = cfg or SuiteConfig()
    lam = _positive_lambda(lam)
    is_tensor = isinstance(seq, TensorFamily)
    seq = _as_sequence(seq)
    rep = InequalityReport(name="ottaviani", parameters={"lambda": lam, "n": seq.n, "dim": seq.dim})
    _check_hypotheses(seq, cfg, rep, symmetric=False, strict=strict, independence=independence, family_is_tensor=is_tensor)

    sn = seq.partial_sums[-1]
    abs_sums = [absolute(s) for s in seq.partial_sums]
    abs_diffs = [absolute(sn - s) for s in seq.partial_sums]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAngleWarning)
        rs = [_proj(a, BorelInterval.below(2 * lam, closed=True), cfg) for a in abs_sums]
        ts = [_proj(a, BorelInterval.below(lam / 2, closed=True), cfg) for a in abs_diffs]
        target = _proj(abs_sums[-1], BorelInterval.above(lam / 2), cfg)
        parts, fs, total, sum_pt = _one_sided_construction(seq, cfg, rep, rs, ts, target, "p")
        _subprojection_invariant("f_k <= e((lam/2, inf); |s_n|)", fs, target, rep)

    t_weights = [_weight(a, BorelInterval.below(lam / 2, closed=True), cfg) for a in abs_diffs]
    min_t = min(t_weights)
    vacuous = min_t == 0.0
    m_lam = math.inf if vacuous else 1.0 / min_t
    tail = _weight(abs_sums[-1], BorelInterval.above(lam / 2), cfg)
    tails = [_weight(a, BorelInterval.above(2 * lam), cfg) for a in abs_sums]
    lhs = max(2.0 ** (-k) * tl for k, tl in enumerate(tails))
    tp = _tau(total)
    rhs = math.inf if vacuous else m_lam * tail
    rep.bounds = [
        Bound("max_k 2^(1-k) tau(e((2lam,inf); |s_k|)) <= tau(p)", lhs, tp),
        Bound("tau(p) <= M tau(e((lam/2,inf); |s_n|))", tp, rhs, vacuous=vacuous),
    ]
    rep.internal_invariants.append(
        InvariantCheck("sum tau(p_k t_k) <= tau(e((lam/2,inf); |s_n|))", sum_pt <= tail + INVARIANT_TOL, tail - sum_pt)
    )
    rep.lhs, rep.rhs = lhs, rhs
    rep.witness_traces.update({"tau(p)": tp, "min_k tau(t_k)": min_t})
    rep.details["M_lambda"] = m_lam
    return _finish(rep, caught, cfg)


def levy_skorohod_verify(
    seq,
    lam: float,
    alpha: float,
    cfg: SuiteConfig | None = None,
    *,
    strict: bool = True,
    independence: IndependenceReport | None = None,
) -> InequalityReport:
    """Noncommutative Lévy–Skorohod inequality, ``0 < alpha < 1``.

    ``max_k 2^(1-k) tau(e((lam,inf); s_k)) <= tau(p) <= M tau(e((alpha lam, inf); s_n))``
    with ``M = 1 / min_k tau(e([-(1-alpha) lam, inf); s_n - s_k))``.
    """
    cfg = cfg or SuiteConfig()
    lam = _positive_lambda(lam)
    if not (0.0 < alpha < 1.0):
        raise BadAlpha(f"alpha must lie in (0, 1), got {alpha}")
    is_tensor = isinstance(seq, TensorFamily)
    seq = _as_sequence(seq)
    rep = InequalityReport(
        name="levy_skorohod", parameters={"lambda": lam, "alpha": alpha, "n": seq.n, "dim": seq.dim}
    )
    _check_hypotheses(seq, cfg, rep, symmetric=False, strict=strict, independence=independence, family_is_tensor=is_tensor)

    sn = seq.partial_sums[-1]
    diffs = [sn - s for s in seq.partial_sums]
    t_interval = BorelInterval.above(-(1 - alpha) * lam, closed=True)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAngleWarning)
        rs = [_proj(s, BorelInterval.below(lam, closed=True), cfg) for s in seq.partial_sums]
        ts = [_proj(dd, t_interval, cfg) for dd in diffs]
        target = _proj(sn, BorelInterval.above(alpha * lam), cfg)
        parts, fs, total, sum_pt = _one_sided_construction(seq, cfg, rep, rs, ts, target, "p")
        _subprojection_invariant("t_k r_k^perp <= e((alpha lam, inf); s_n)", fs, target, rep)

    min_t = min(_weight(dd, t_interval, cfg) for dd in diffs)
    vacuous = min_t == 0.0
    m_lam = math.inf if vacuous else 1.0 / min_t
    tail = _weight(sn, BorelInterval.above(alpha * lam), cfg)
    tails = [_weight(s, BorelInterval.above(lam), cfg) for s in seq.partial_sums]
    lhs = max(2.0 ** (-k) * tl for k, tl in enumerate(tails))
    tp = _tau(total)
    rhs = math.inf if vacuous else m_lam * tail
    rep.bounds = [
        Bound("max_k 2^(1-k) tau(e((lam,inf); s_k)) <= tau(p)", lhs, tp),
        Bound("tau(p) <= M tau(e((alpha lam,inf); s_n))", tp, rhs, vacuous=vacuous),
    ]
    rep.internal_invariants.append(
        InvariantCheck("sum tau(p_k t_k) <= tau(e((alpha lam,inf); s_n))", sum_pt <= tail + INVARIANT_TOL, tail - sum_pt)
    )
    rep.lhs, rep.rhs = lhs, rhs
    rep.witness_traces.update({"tau(p)": tp, "min_k tau(t_k)": min_t})
    rep.details["M_lambda"] = m_lam
    return _finish(rep, caught, cfg)


def _check_doubling(d, cfg):
    if d * d > cfg.dim_cap:
        raise DimOverflow(f"doubled dimension {d * d} exceeds cap {cfg.dim_cap}")


def strong_symmetrization_verify(
    xs: Sequence,
    lam: float,
    cfg: SuiteConfig | None = None,
) -> InequalityReport:
    """Strong symmetrization ``tau(p) <= 2 tau(q_1 ∨ ... ∨ q_n)`` in ``M (x) M``.

    With ``z_k = x_k - med(x_k)``: ``r_0 = 1``, ``r_k = r_{k-1} ∧ e((-inf,lam); z_k)``,
    ``p_k = r_{k-1} ∧ e([lam,inf); z_k)``, ``q_k = e([lam,inf); hat x_k)`` and
    ``f_k = e((-inf,0]; x_k' - med(x_k'))``.  The ``r_k``/``p_k`` live in the
    first factor, where meets commute with ``y -> y (x) 1``, so they are formed
    in ``M`` and lifted.  No independence among the ``x_k`` is required.
    """
    cfg = cfg or SuiteConfig()
    if isinstance(xs, TensorFamily):
        xs = xs.members
    xs = [x if isinstance(x, HermitianOperator) else make_hermitian(x) for x in xs]
    if not xs:
        raise EmptyFamily("strong symmetrization needs at least one variable")
    d = xs[0].dim
    if any(x.dim != d for x in xs):
        raise DimMismatch("all variables must act on the same space")
    _check_doubling(d, cfg)
    lam = float(lam)
    lat = cfg.lattice
    dims = (d, d)
    rep = InequalityReport(name="strong_symmetrization", parameters={"lambda": lam, "n": len(xs), "dim": d})
    rep.hypothesis_checks.append(HypothesisCheck("self-adjoint summands", True, 0.0, "no independence required"))

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAngleWarning)
        doubled = [double(x, cfg.dim_cap) for x in xs]
        meds = [median(x) for x in xs]
        zs = [x - m for x, m in zip(xs, meds)]
        below = [_proj(z, BorelInterval.below(lam, closed=False), cfg) for z in zs]
        above = [~b for b in below]
        running = identity(d)
        parts = []
        for b, a in zip(below, above):
            parts.append(meet(running, a, lat))
            running = meet(running, b, lat)
        qs = [_proj(dv.hat_x, BorelInterval.above(lam, closed=True), cfg) for dv in doubled]
        q_join = join_all(qs, lat)

    lifted_parts = [embed_projection(p, dims, 0) for p in parts]
    lifted_above = [embed_projection(a, dims, 0) for a in above]
    meds_prime = [median(dv.bar_x_prime) for dv in doubled]
    fs = [
        _proj(dv.bar_x_prime - mp, BorelInterval.below(0.0, closed=True), cfg)
        for dv, mp in zip(doubled, meds_prime)
    ]

    _orthogonality_invariants("p", parts, rep)
    med_dev = max(abs(a - b) for a, b in zip(meds, meds_prime))
    rep.internal_invariants.append(InvariantCheck("med(x_k) = med(x_k')", med_dev <= INVARIANT_TOL, med_dev))
    sub_dev = 0.0
    for a, f, q in zip(lifted_above, fs, qs):
        af = Projection(a.matrix @ f.matrix)
        sub_dev = max(sub_dev, subprojection_deviation(af, q))
    rep.internal_invariants.append(
        InvariantCheck("e([lam,inf); z_k) f_k <= q_k", sub_dev < INVARIANT_TOL, sub_dev)
    )
    tau_f = [_tau(f) for f in fs]
    rep.internal_invariants.append(InvariantCheck("tau(f_k) >= 1/2", min(tau_f) >= 0.5 - INVARIANT_TOL, min(tau_f)))
    big = d * d
    sum_pf = sum(float(np.trace(p.matrix @ f.matrix).real) / big for p, f in zip(lifted_parts, fs))
    sum_pq = sum(float(np.trace(p.matrix @ q_join.matrix).real) / big for p in lifted_parts)
    tau_p_parts = [_tau(p) for p in parts]
    tau_p = sum(tau_p_parts)
    tau_q = _tau(q_join)
    fact_dev = abs(sum_pf - sum(tp * tf for tp, tf in zip(tau_p_parts, tau_f)))
    rep.internal_invariants.append(
        InvariantCheck("sum tau(p_k f_k) = sum tau(p_k) tau(f_k)", fact_dev < INVARIANT_TOL, fact_dev)
    )
    rep.internal_invariants.append(
        InvariantCheck("sum tau(p_k f_k) <= sum tau(p_k Q) <= tau(Q)", sum_pf <= sum_pq + INVARIANT_TOL and sum_pq <= tau_q + INVARIANT_TOL, tau_q - sum_pf)
    )
    any_tail = any(_weight(z, BorelInterval.above(lam, closed=True), cfg) > 0 for z in zs)
    rep.internal_invariants.append(
        InvariantCheck("p nonzero when some e([lam,inf); z_k) is nonzero", (not any_tail) or tau_p > 0, tau_p)
    )

    rep.bounds = [Bound("tau(p) <= 2 tau(q_1 v ... v q_n)", tau_p, 2 * tau_q)]
    rep.lhs, rep.rhs = tau_p, 2 * tau_q
    _record_parts(rep, "tau(p_k)", parts)
    _record_parts(rep, "tau(q_k)", qs)
    _record_parts(rep, "tau(f_k)", fs)
    rep.witness_traces.update({"tau(p)": tau_p, "tau(Q)": tau_q, "sum tau(p_k f_k)": sum_pf})
    rep.details["medians"] = meds
    return _finish(rep, caught, cfg)


def weak_symmetrization_verify(
    x,
    lam: float,
    alpha: float,
    cfg: SuiteConfig | None = None,
) -> InequalityReport:
    """Weak symmetrization chain with ``m = med(x)``::

        tau(e([lam,inf); x - m))   <= 2 tau(e([lam,inf); hat x))
        tau(e([lam,inf); |x - m|)) <= 2 tau(e([lam,inf); |hat x|)) <= 4 tau(e([lam/2,inf); |x - alpha|))

    together with the same right link at ``alpha = m``.
    """
    cfg = cfg or SuiteConfig()
    x = x if isinstance(x, HermitianOperator) else make_hermitian(x)
    _check_doubling(x.dim, cfg)
    lam, alpha = float(lam), float(alpha)
    dv = double(x, cfg.dim_cap)
    m = median(x)
    tail = BorelInterval.above(lam, closed=True)
    half = BorelInterval.above(lam / 2, closed=True)
    a = _weight(x - m, tail, cfg)
    b = _weight(dv.hat_x, tail, cfg)
    c = _weight(absolute(x - m), tail, cfg)
    dd = _weight(absolute(dv.hat_x), tail, cfg)
    e_alpha = _weight(absolute(x - alpha), half, cfg)
    e_med = _weight(absolute(x - m), half, cfg)
    rep = InequalityReport(
        name="weak_symmetrization",
        parameters={"lambda": lam, "alpha": alpha, "dim": x.dim},
        bounds=[
            Bound("tau(e(x - m)) <= 2 tau(e(hat x))", a, 2 * b),
            Bound("tau(e(|x - m|)) <= 2 tau(e(|hat x|))", c, 2 * dd),
            Bound("2 tau(e(|hat x|)) <= 4 tau(e_{lam/2}(|x - alpha|))", 2 * dd, 4 * e_alpha),
            Bound("2 tau(e(|hat x|)) <= 4 tau(e_{lam/2}(|x - m|))", 2 * dd, 4 * e_med),
        ],
        witness_traces={
            "tau(e(x - m))": a,
            "tau(e(hat x))": b,
            "tau(e(|x - m|))": c,
            "tau(e(|hat x|))": dd,
            "tau(e_half(|x - alpha|))": e_alpha,
            "tau(e_half(|x - m|))": e_med,
        },
        details={"median": m},
    )
    rep.lhs, rep.rhs = c, 4 * e_alpha
    return rep.finalize(cfg.tol_check)


def clarkson_constant(p: float) -> float:
    """``K_p = 2^(p-1)``: ``|a - b|^p <= 2^(p-1)(|a|^p + |b|^p)`` by convexity."""
    return 2.0 ** (p - 1)


def lp_symmetrization_verify(
    x,
    alpha: float,
    p: float,
    cfg: SuiteConfig | None = None,
) -> InequalityReport:
    """``1/2 ||x - med(x)||_p^p <= ||hat x||_p^p <= 2 K_p ||x - alpha||_p^p``."""
    cfg = cfg or SuiteConfig()
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    x = x if isinstance(x, HermitianOperator) else make_hermitian(x)
    _check_doubling(x.dim, cfg)
    alpha = float(alpha)
    dv = double(x, cfg.dim_cap)
    m = median(x)
    a = lp_power(x - m, p)
    b = lp_power(dv.hat_x, p)
    c = lp_power(x - alpha, p)
    k_p = clarkson_constant(p)
    rep = InequalityReport(
        name="lp_symmetrization",
        parameters={"alpha": alpha, "p": p, "dim": x.dim},
        bounds=[
            Bound("1/2 ||x - med||_p^p <= ||hat x||_p^p", 0.5 * a, b),
            Bound("||hat x||_p^p <= 2 K_p ||x - alpha||_p^p", b, 2 * k_p * c),
        ],
        witness_traces={"||x - med||_p^p": a, "||hat x||_p^p": b, "||x - alpha||_p^p": c},
        details={"median": m, "K_p": k_p},
    )
    rep.lhs, rep.rhs = 0.5 * a, 2 * k_p * c
    return rep.finalize(cfg.tol_check)
