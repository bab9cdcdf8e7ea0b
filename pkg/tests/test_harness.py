import json

import numpy as np
import pytest

from oracles import commutator_exact, operator_norm_via_gram
from qprob.classical_reduction import ClassicalInstance
from qprob.config import SuiteConfig
from qprob.errors import DimOverflow
from qprob.harness import cli
from qprob.harness.generators import (
    REMARK_MATRICES,
    GeneratorSpec,
    generate,
    lambda_sweep,
    remark_example,
    trace_quantile,
)
from qprob.harness.io import (
    dumps,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_report,
    save_instance,
    save_report,
)
from qprob.harness.suite import PlanEntry, default_plan, run_suite, write_suite
from qprob.independence import TensorFamily, weak_full_independence_test
from qprob.maximal_inequalities import levy_verify
from qprob.operator_core import make_hermitian
from qprob.trace_measure import is_symmetric


class TestGenerators:
    def test_symmetric_spectrum_seed7(self):
        x = generate(GeneratorSpec("symmetric_spectrum", (4,), 1, 7))
        assert is_symmetric(x)

    def test_tensor_family(self):
        fam = generate(GeneratorSpec("tensor_symmetric_family", (2, 2, 2), 3, 11))
        assert isinstance(fam, TensorFamily) and fam.product_dim == 8
        assert weak_full_independence_test(fam).passed
        sums = np.cumsum([m.matrix for m in fam.members], axis=0)
        for a in sums:
            for b in sums:
                assert np.max(np.abs(a @ b - b @ a)) <= 1e-12

    @pytest.mark.parametrize("kind,dims", [("random_hermitian", (5,)), ("symmetric_spectrum", (5,)), ("tensor_symmetric_family", (2, 3))])
    def test_deterministic(self, kind, dims):
        spec = GeneratorSpec(kind, dims, len(dims), 3)
        a, b = generate(spec), generate(spec)
        ma = a.members if isinstance(a, TensorFamily) else [a]
        mb = b.members if isinstance(b, TensorFamily) else [b]
        for x, y in zip(ma, mb):
            assert np.array_equal(x.matrix, y.matrix)

    def test_classical(self):
        inst = generate(GeneratorSpec("diagonal_classical", (4, 6), 2, 1, {"symmetric": True}))
        assert isinstance(inst, ClassicalInstance)
        assert all(v.is_symmetric() for v in inst.variables)

    def test_overflow(self):
        with pytest.raises(DimOverflow):
            generate(GeneratorSpec("tensor_symmetric_family", (3, 3, 3, 3, 3), 5, 0), dim_cap=81)
        with pytest.raises(DimOverflow):
            generate(GeneratorSpec("random_hermitian", (300,), 1, 0))

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            GeneratorSpec("gaussian")
        with pytest.raises(ValueError):
            GeneratorSpec("random_hermitian", (0,))

    def test_spec_round_trip(self):
        spec = GeneratorSpec("diagonal_classical", (2, 3), 2, 9, {"symmetric": True})
        assert GeneratorSpec.from_dict(spec.to_dict()) == spec


class TestNoncommutingExample:
    def test_matrices_as_printed(self):
        seq = remark_example()
        for x, m in zip(seq.xs, REMARK_MATRICES):
            assert np.array_equal(x.matrix, np.array(m, dtype=complex))

    def test_s4_scalar(self):
        assert np.array_equal(remark_example().partial_sums[-1].matrix, 2 * np.eye(3))

    def test_commutator_by_oracle(self):
        c = commutator_exact(REMARK_MATRICES[0], REMARK_MATRICES[1])
        assert operator_norm_via_gram(c) > 0.5

    def test_partial_sums_commute_with_s4(self):
        seq = remark_example()
        s4 = seq.partial_sums[-1].matrix
        for s in seq.partial_sums:
            assert np.array_equal(s.matrix @ s4, s4 @ s.matrix)


class TestSweep:
    def test_quantiles(self):
        x = make_hermitian(np.diag([1.0, 2.0, 3.0, 4.0]))
        assert [trace_quantile(x, q) for q in (0.25, 0.5, 0.75)] == [1.0, 2.0, 3.0]
        assert lambda_sweep(x) == [1.0, 2.0, 3.0, 5.0]

    def test_drops_non_positive(self):
        x = make_hermitian(np.diag([-2.0, 0.0, 0.0, 1.0]))
        assert lambda_sweep(x) == [2.0 + 1.0]


class TestIO:
    def test_operator_round_trip(self, rng):
        from qprob.harness.generators import random_hermitian

        x = random_hermitian(4, rng)
        y = instance_from_dict(json.loads(dumps(instance_to_dict(x))))
        assert np.array_equal(x.matrix, y.matrix)

    def test_family_round_trip(self, tmp_path):
        fam = generate(GeneratorSpec("tensor_symmetric_family", (2, 3), 2, 5))
        path = save_instance(fam, tmp_path / "fam.json")
        again = load_instance(path)
        for a, b in zip(fam.members, again.members):
            assert np.array_equal(a.matrix, b.matrix)

    def test_classical_round_trip(self, tmp_path):
        inst = generate(GeneratorSpec("diagonal_classical", (3, 4), 2, 2))
        again = load_instance(save_instance(inst, tmp_path / "c.json"))
        assert again.variables == inst.variables

    def test_report_byte_identical(self, tmp_path):
        rep = levy_verify(generate(GeneratorSpec("tensor_symmetric_family", (2, 2, 3), 3, 4)), 0.7)
        p1 = save_report(rep, tmp_path / "a.json")
        p2 = save_report(load_report(p1), tmp_path / "b.json")
        assert p1.read_bytes() == p2.read_bytes()

    def test_vacuous_report_round_trip(self, tmp_path):
        from qprob.maximal_inequalities import ottaviani_verify
        from qprob.independence import tensor_family

        rep = ottaviani_verify(tensor_family([np.diag([1.0, -1.0])] * 2), 1.0)
        p1 = save_report(rep, tmp_path / "a.json")
        p2 = save_report(load_report(p1), tmp_path / "b.json")
        assert p1.read_bytes() == p2.read_bytes()


class TestSuite:
    def test_empty_plan(self):
        rep = run_suite(SuiteConfig(), [])
        assert rep.summary["total"] == 0 and rep.exit_code == 0

    def test_non_symmetric_levy_recorded(self):
        plan = [
            PlanEntry(GeneratorSpec("random_hermitian", (3,), 1, 0), "levy", {"lambda": 0.5}),
            PlanEntry(GeneratorSpec("tensor_symmetric_family", (2, 2), 2, 1), "levy", {"lambda": "sweep"}),
        ]
        rep = run_suite(SuiteConfig(), plan)
        statuses = [r["status"] for r in rep.to_dict()["records"]]
        assert statuses[0] == "hypothesis_failed"
        assert len(statuses) > 1 and set(statuses[1:]) <= {"pass", "vacuous"}
        assert rep.exit_code == 2

    def test_small_default_plan(self, tmp_path):
        cfg = SuiteConfig(seed=4)
        rep = run_suite(cfg, default_plan(cfg, 3))
        assert rep.exit_code == 0
        assert set(rep.worst_slack()) == {"levy", "ottaviani", "levy-skorohod", "symmetrize-strong", "symmetrize-weak", "symmetrize-lp"}
        run_dir = write_suite(rep, tmp_path, 4, "fixed")
        data = json.loads((run_dir / "suite.json").read_text())
        assert data["summary"]["total"] == len(list((run_dir / "instances").iterdir()))

    def test_plan_entry_validation(self):
        with pytest.raises(ValueError):
            PlanEntry(GeneratorSpec("random_hermitian"), "kolmogorov")


class TestCLI:
    def test_generate_and_verify(self, tmp_path):
        inst = tmp_path / "fam.json"
        assert cli.main(["generate", "--kind", "tensor_symmetric_family", "--dims", "2,2", "--seed", "3", "--out", str(inst)]) == 0
        out = tmp_path / "rep.json"
        assert cli.main(["verify", "levy", "--in", str(inst), "--lambda", "0.5", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["holds"] is True

    def test_hypothesis_failure_exit(self, tmp_path):
        inst = tmp_path / "x.json"
        cli.main(["generate", "--kind", "random_hermitian", "--dims", "3", "--seed", "1", "--out", str(inst)])
        out = tmp_path / "rep.json"
        assert cli.main(["verify", "levy", "--in", str(inst), "--lambda", "0.5", "--out", str(out)]) == 2
        assert json.loads(out.read_text())["error"] == "HypothesisFailed"

    def test_missing_lambda(self, tmp_path):
        assert cli.main(["verify", "levy", "--in", str(tmp_path / "none.json")]) == 2

    def test_bad_input_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert cli.main(["verify", "median", "--in", str(bad), "--out", str(tmp_path / "o.json")]) == 2

    def test_unknown_subcommand(self):
        assert cli.main(["frobnicate"]) == 2

    def test_median_and_chebyshev(self, tmp_path):
        inst = tmp_path / "x.json"
        cli.main(["generate", "--kind", "random_hermitian", "--dims", "4", "--seed", "2", "--out", str(inst)])
        assert cli.main(["verify", "median", "--in", str(inst), "--p", "2", "--out", str(tmp_path / "m.json")]) == 0
        assert cli.main(["verify", "chebyshev", "--in", str(inst), "--lambda", "0.5", "--p", "2", "--out", str(tmp_path / "c.json")]) == 0

    def test_suite_and_seed_env(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"config": {"seed": 1}, "plan": "default", "instances_per_verifier": 1}))
        monkeypatch.setenv("QPROB_SEED", "17")
        assert cli.main(["suite", "--config", str(cfg), "--out", str(tmp_path / "runs")]) == 0
        run_dirs = list((tmp_path / "runs").iterdir())
        assert len(run_dirs) == 1 and run_dirs[0].name.startswith("run-seed17-")
        data = json.loads((run_dirs[0] / "suite.json").read_text())
        assert data["config"]["seed"] == 17

    def test_demo_remark(self, tmp_path, capsys):
        out = tmp_path / "remark.json"
        assert cli.main(["demo-remark", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert max(data["commutation_deviation"]) <= 1e-12
        assert data["x1x2_commutator_norm"] > 0.5
        assert data["witness_orthogonality_ok"]
        assert "x1 x2 - x2 x1" in capsys.readouterr().out
