"""
Partial sums that commute with the total
========================================

Four 3x3 summands that do not commute with each other, yet every partial sum
commutes with the total s_4 = 2 * identity.  The witness construction still
runs; the symmetry and independence hypotheses are reported as they are.
"""

from qprob.harness import remark_example
from qprob.harness.cli import remark_demo

seq = remark_example()
print("s_4 =\n", seq.partial_sums[-1].matrix.real)

out = remark_demo(lam=1.0)
print("max ||s_k s_4 - s_4 s_k|| =", max(out["commutation_deviation"]))
print("||x1 x2 - x2 x1|| =", round(out["x1x2_commutator_norm"], 4))
for h in out["hypotheses"]:
    print(f"  {h['name']}: {'pass' if h['passed'] else 'fail'} (deviation {h['deviation']:.3g})")
print("witness pieces orthogonal:", out["witness_orthogonality_ok"])
