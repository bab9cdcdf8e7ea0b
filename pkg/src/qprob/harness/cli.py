"""Command line interface: ``python -m qprob`` or the ``qprob`` script.

Exit codes: 0 when every checked bound holds, 1 on an inequality (or
internal invariant) failure, 2 on a hypothesis failure or bad input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ..config import SuiteConfig
from ..errors import HypothesisFailed, QProbError
from ..maximal_inequalities import levy_verify
from ..operator_core import commutator_norm
from .generators import KINDS, GeneratorSpec, generate, remark_example
from .io import dumps, load_instance, load_json, save_json, save_instance
from .suite import VERIFIERS, plan_from_config, run_suite, run_verifier, write_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _config(path=None) -> tuple[SuiteConfig, dict]:
    data = load_json(path) if path else {}
    cfg = SuiteConfig.from_dict(data.get("config", {})).with_env_seed()
    return cfg, data


def _emit(obj: dict, out) -> None:
    if out:
        save_json(obj, out)
    else:
        sys.stdout.write(dumps(obj))


def cmd_verify(args) -> int:
    cfg, _ = _config(args.config)
    params = {"lambda": args.lam, "alpha": args.alpha, "p": args.p}
    try:
        inst = load_instance(args.infile, cfg.tol_herm)
        rep = run_verifier(args.verifier, inst, params, cfg)
    except HypothesisFailed as exc:
        _emit({"error": "HypothesisFailed", "hypothesis": exc.hypothesis, "deviation": exc.deviation, "message": str(exc)}, args.out)
        return EXIT_INPUT
    except (QProbError, ValueError, TypeError, KeyError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_INPUT
    _emit(rep.to_dict(), args.out)
    return EXIT_OK if rep.holds and rep.invariants_ok else EXIT_FAIL


def cmd_generate(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(",")) if args.dims else (2,)
    seed = args.seed
    cfg, _ = _config()
    if seed is None:
        seed = cfg.seed
    options = {"symmetric": True} if args.symmetric else {}
    try:
        spec = GeneratorSpec(args.kind, dims, args.n_vars or len(dims), seed, options)
        inst = generate(spec, max(cfg.dim_cap, 4096) if args.kind == "diagonal_classical" else cfg.dim_cap)
    except (QProbError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    save_instance(inst, args.out)
    return EXIT_OK


def cmd_suite(args) -> int:
    try:
        cfg, data = _config(args.config)
        plan = plan_from_config(data, cfg)
    except (QProbError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_suite(cfg, plan)
    run_dir = write_suite(report, args.out, cfg.seed)
    s = report.summary
    print(f"{s['total']} runs: {s['pass']} pass, {s['vacuous']} vacuous, {s['fail']} fail, "
          f"{s['hypothesis_failed']} hypothesis failures, {s['error']} errors -> {run_dir}")
    return report.exit_code


def remark_demo(lam: float = 1.0, cfg: SuiteConfig | None = None) -> dict:
    """Commutation facts and the Lévy witness construction on the non-commuting 3x3 example."""
    cfg = cfg or SuiteConfig()
    seq = remark_example()
    sn = seq.partial_sums[-1]
    comm = [commutator_norm(s, sn) for s in seq.partial_sums]
    m1, m2 = seq.xs[0].matrix, seq.xs[1].matrix
    x12 = float(np.linalg.norm(m1 @ m2 - m2 @ m1, 2))
    rep = levy_verify(seq, lam, cfg, strict=False)
    orth = [c for c in rep.internal_invariants if "orthogonal" in c.label or "is a projection" in c.label]
    return {
        "s_n": [[[float(z.real), float(z.imag)] for z in row] for row in sn.matrix],
        "commutation_deviation": comm,
        "commutes_with_s_n": bool(max(comm) <= 1e-12),
        "x1x2_commutator_norm": x12,
        "x1_x2_commute": bool(x12 <= 1e-12),
        "hypotheses": [{"name": h.name, "passed": bool(h.passed), "deviation": h.deviation} for h in rep.hypothesis_checks],
        "witness_orthogonality_ok": bool(all(c.passed for c in orth)),
        "levy_report": rep.to_dict(),
    }


def cmd_demo_remark(args) -> int:
    cfg, _ = _config(args.config)
    out = remark_demo(args.lam, cfg)
    if args.out:
        save_json(out, args.out)
    print(f"s_k s_4 = s_4 s_k: max deviation {max(out['commutation_deviation']):.3g}")
    print(f"||x1 x2 - x2 x1|| = {out['x1x2_commutator_norm']:.6f}")
    for h in out["hypotheses"]:
        print(f"hypothesis {h['name']}: {'pass' if h['passed'] else 'FAIL'} (deviation {h['deviation']:.3g})")
    print(f"witness orthogonality: {'ok' if out['witness_orthogonality_ok'] else 'FAILED'}")
    ok = out["commutes_with_s_n"] and out["witness_orthogonality_ok"]
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qprob", description="Numerical verification of noncommutative maximal inequalities.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one verifier on an instance file")
    v.add_argument("verifier", choices=VERIFIERS)
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--lambda", dest="lam", type=float, default=None)
    v.add_argument("--alpha", type=float, default=None)
    v.add_argument("--p", type=float, default=None)
    v.add_argument("--out", default=None)
    v.add_argument("--config", default=None, help="JSON file with a 'config' object")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a seeded instance")
    g.add_argument("--kind", required=True, choices=KINDS)
    g.add_argument("--dims", default="2")
    g.add_argument("--n-vars", dest="n_vars", type=int, default=None)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--symmetric", action="store_true", help="symmetric variables (diagonal_classical)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("suite", help="run a verification plan")
    s.add_argument("--config", default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_suite)

    d = sub.add_parser("demo-remark", help="the non-commuting 3x3 example end to end")
    d.add_argument("--lambda", dest="lam", type=float, default=1.0)
    d.add_argument("--out", default=None)
    d.add_argument("--config", default=None)
    d.set_defaults(func=cmd_demo_remark)
    return ap


def _needs_lambda(args) -> bool:
    return args.command == "verify" and args.verifier not in ("median", "symmetrize-lp") and args.lam is None


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if _needs_lambda(args):
        print(f"error: verifier {args.verifier} requires --lambda", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
