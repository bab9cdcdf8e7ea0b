"""Acceptance criteria, each at its stated tolerance.

Every test records a one-line verdict that is printed in the
``acceptance criteria`` section of the pytest summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import (
    commutator_exact,
    enumerate_paths,
    levy_oracle,
    lp_power_from_eigenvalues,
    median_by_definition,
    operator_norm_via_gram,
)
from qprob.classical_reduction import classical_corollary_check
from qprob.config import SuiteConfig
from qprob.harness.cli import remark_demo
from qprob.harness.generators import REMARK_MATRICES, diagonal_classical, random_hermitian
from qprob.harness.io import dumps
from qprob.harness.suite import VERIFIERS, default_plan, run_suite
from qprob.independence import double
from qprob.operator_core import HermitianOperator, lp_power
from qprob.projection_lattice import join, meet
from qprob.trace_measure import chebyshev_check, is_symmetric, median, median_report, tail_integral_lp_power, variance
from test_projection_lattice import random_pair_with_overlap

THEOREM_VERIFIERS = VERIFIERS[:6]
SUITE_SEED = 20240


@pytest.fixture(scope="module")
def default_suite():
    cfg = SuiteConfig(seed=SUITE_SEED)
    start = time.perf_counter()
    report = run_suite(cfg, default_plan(cfg, 200))
    return cfg, report, time.perf_counter() - start


def test_criterion_1_theorem_suites(default_suite, record_criterion):
    cfg, report, elapsed = default_suite
    records = report.to_dict()["records"]
    instances = {v: {r["id"][:5] for r in records if r["verifier"] == v} for v in THEOREM_VERIFIERS}
    bad = [r["id"] for r in records if r["status"] not in ("pass", "vacuous")]
    not_holding = [r["id"] for r in records if "report" in r and not r["report"]["holds"]]
    worst = report.worst_slack()
    ok = (
        not bad
        and not not_holding
        and all(len(instances[v]) == 200 for v in THEOREM_VERIFIERS)
        and all(worst[v] >= -1e-9 for v in THEOREM_VERIFIERS)
        and elapsed < 120
    )
    record_criterion(
        1,
        "theorem suites hold on 200 instances per verifier",
        ok,
        f"{len(records)} runs, worst slack {min(worst.values()):.2e}, {elapsed:.1f}s",
    )
    assert not bad and not not_holding
    assert all(len(instances[v]) == 200 for v in THEOREM_VERIFIERS)
    assert all(worst[v] >= -1e-9 for v in THEOREM_VERIFIERS)
    assert elapsed < 120


def test_criterion_2_levy_invariants(default_suite, record_criterion):
    _, report, _ = default_suite
    levy = [r for r in report.records if r["verifier"] == "levy" and r["status"] in ("pass", "vacuous")]
    wanted = ("pieces pairwise orthogonal", "f_k <= e((lam, inf); s_n)", "tau(p^perp) <= 1 - 2^(1-k) tau(r_k^perp)")
    failures = 0
    for r in levy:
        invs = r["report"]["internal_invariants"]
        for side in ("p", "q"):
            for w in wanted:
                hits = [c for c in invs if c["label"] == f"{side}: {w}"]
                if len(hits) != 1 or not hits[0]["passed"] or not (float(hits[0]["value"]) <= 1e-9):
                    failures += 1
    ok = bool(levy) and failures == 0
    record_criterion(2, "Levy witness invariants on every accepted instance", ok, f"{len(levy)} runs, {failures} failures")
    assert ok


def _ls_oracle(laws, lam, alpha):
    lam, alpha = Fraction(lam), Fraction(alpha)
    n = len(laws)
    paths = list(enumerate_paths(laws))
    lhs = sum((p for v, p in paths if max(sum(v[: k + 1]) for k in range(n)) > lam), Fraction(0))
    target = sum((p for v, p in paths if sum(v) > alpha * lam), Fraction(0))
    m = min(sum((p for v, p in paths if sum(v[k + 1 :]) >= -(1 - alpha) * lam), Fraction(0)) for k in range(n))
    # product form: min_k P(S_n - S_k >= -(1-alpha) lam) * P(max S_k > lam) <= P(S_n > alpha lam)
    return m * lhs, target


def test_criterion_3_classical_agreement(record_criterion):
    rng = np.random.default_rng(3)
    worst, checked, exact_fail, oracle_dev = 0.0, 0, 0, 0.0
    for i in range(50):
        n = int(rng.integers(1, 4))
        dims = tuple(int(d) for d in rng.integers(2, 9, size=n))
        inst = diagonal_classical(dims, rng, symmetric=True)
        assert inst.sample_space_size <= 4096
        laws = [list(v.outcomes) for v in inst.variables]
        lam = Fraction(int(rng.integers(1, 2 * n + 4)), 2) - Fraction(1, 4)
        alpha = Fraction(int(rng.integers(1, 4)), 4)

        rep = classical_corollary_check(inst, "levy", lam)
        o = levy_oracle(laws, lam)
        oracle_dev = max(
            oracle_dev,
            abs(rep.lhs - float(o["tau_p"])),
            abs(rep.rhs - float(o["rhs"])),
            abs(rep.details["operator_report"]["lhs"] - float(o["lhs"])),
            abs(rep.details["operator_report"]["witness_traces"]["tau(p)"] - float(o["tau_p"])),
            *(abs(rep.details["operator_report"]["witness_traces"][f"tau(p_k)_{k}"] - float(pk)) for k, pk in enumerate(o["p_k"], 1)),
        )
        reps = [rep]
        reps.append(classical_corollary_check(inst, "levy_abs", lam))
        ls = classical_corollary_check(inst, "levy_skorohod", lam, alpha)
        ls_lhs, ls_rhs = _ls_oracle(laws, lam, alpha)
        oracle_dev = max(oracle_dev, abs(ls.lhs - float(ls_lhs)), abs(ls.rhs - float(ls_rhs)))
        reps.append(ls)
        for r in reps:
            checked += 1
            worst = max(worst, r.details["max_agreement_deviation"])
            if not r.details["exact_holds"] or not r.invariants_ok or not r.holds:
                exact_fail += 1
    ok = worst <= 1e-12 and oracle_dev <= 1e-12 and exact_fail == 0
    record_criterion(
        3,
        "diagonal classical instances agree with enumeration",
        ok,
        f"{checked} checks, operator/oracle deviation {max(worst, oracle_dev):.1e}",
    )
    assert ok


def test_criterion_4_noncommuting_example(record_criterion):
    out = remark_demo(1.0)
    oracle_norm = operator_norm_via_gram(commutator_exact(REMARK_MATRICES[0], REMARK_MATRICES[1]))
    hyp = {h["name"]: h["passed"] for h in out["hypotheses"]}
    ok = (
        max(out["commutation_deviation"]) <= 1e-12
        and oracle_norm > 0.5
        and abs(out["x1x2_commutator_norm"] - oracle_norm) <= 1e-9
        and out["witness_orthogonality_ok"]
        and set(hyp) >= {"summands symmetric", "weak full independence"}
    )
    record_criterion(
        4,
        "3x3 example: commutation with s_4, ||[x1,x2]|| > 0.5, Levy mechanics",
        ok,
        f"||[x1,x2]|| = {oracle_norm:.4f}; hypotheses " + ", ".join(f"{k}={'pass' if v else 'fail'}" for k, v in hyp.items()),
    )
    assert ok


def test_criterion_5_chebyshev_and_median(record_criterion):
    rng = np.random.default_rng(5)
    worst_cheb, worst_med, def_dev = math.inf, math.inf, 0.0
    for _ in range(500):
        x = random_hermitian(int(rng.integers(1, 17)), rng)
        top = float(np.max(np.abs(np.linalg.eigvalsh(x.matrix))))
        for p in (1, 2, 4):
            for t in (0.25 * top + 1e-3, 0.5 * top + 1e-3, 0.9 * top + 1e-3):
                worst_cheb = min(worst_cheb, chebyshev_check(x, t, p).slack)
        rep = median_report(x, 2.0)
        worst_med = min(worst_med, rep.slack)
        def_dev = max(def_dev, abs(median(x) - median_by_definition(x.matrix)))
    ok = worst_cheb >= -1e-12 and worst_med >= -1e-12 and def_dev < 1e-9
    record_criterion(
        5,
        "Chebyshev and median properties on 500 random Hermitians",
        ok,
        f"worst slack chebyshev {worst_cheb:.2e}, median {worst_med:.2e}",
    )
    assert ok


def test_criterion_6_lattice_oracle(record_criterion):
    from oracles import alternating_meet

    rng = np.random.default_rng(6)
    worst_meet, worst_join = 0.0, -math.inf
    for _ in range(200):
        p, q, _ = random_pair_with_overlap(rng, 12)
        worst_meet = max(worst_meet, float(np.max(np.abs(meet(p, q).matrix - alternating_meet(p.matrix, q.matrix)))))
        worst_join = max(worst_join, join(p, q).trace() - p.trace() - q.trace())
    ok = worst_meet <= 1e-8 and worst_join <= 1e-9
    record_criterion(6, "meet equals alternating-projection limit; join subadditive", ok, f"max meet deviation {worst_meet:.1e}")
    assert ok


def test_criterion_7_tail_integral(record_criterion):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        g = random_hermitian(int(rng.integers(1, 9)), rng).matrix
        x = HermitianOperator(g @ g)
        for p in (1, 2, 3):
            worst = max(worst, abs(tail_integral_lp_power(x, p) - lp_power_from_eigenvalues(x.matrix, p)))
    ok = worst <= 1e-6
    record_criterion(7, "layer-cake quadrature equals eigenvalue L_p power", ok, f"max deviation {worst:.1e}")
    assert ok


def test_criterion_8_symmetrization_identities(record_criterion):
    rng = np.random.default_rng(8)
    worst_var, asym, worst_med = 0.0, 0, 0.0
    for _ in range(100):
        x = random_hermitian(int(rng.integers(1, 9)), rng)
        dv = double(x)
        worst_var = max(worst_var, abs(lp_power(dv.hat_x, 2) - 2 * variance(x)))
        asym += not is_symmetric(dv.hat_x)
        worst_med = max(worst_med, abs(median(dv.bar_x) - median(dv.bar_x_prime)) / max(1.0, x.norm))
    ok = worst_var <= 1e-9 and asym == 0 and worst_med <= 1e-12
    record_criterion(
        8,
        "||hat x||_2^2 = 2 var(x), hat x symmetric, med(bar x) = med(bar x')",
        ok,
        f"variance deviation {worst_var:.1e}, median deviation {worst_med:.1e}",
    )
    assert ok


def test_criterion_9_determinism(default_suite, record_criterion):
    cfg, first, _ = default_suite
    second = run_suite(cfg, default_plan(cfg, 200))
    a, b = dumps(first.to_dict()), dumps(second.to_dict())
    ok = a == b
    record_criterion(9, "two runs of the default suite give identical reports", ok, f"{len(a)} bytes")
    assert ok

