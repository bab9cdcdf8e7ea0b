"""
Symmetrization by doubling
==========================

x_bar = x (x) 1 and x_bar' = 1 (x) x are independent copies of x, and their
difference x_hat is symmetric.  Its L_2 norm squared is twice the variance.
"""

import numpy as np

from qprob import double, is_symmetric, lp_power, lp_symmetrization_verify, strong_symmetrization_verify, variance, weak_symmetrization_verify
from qprob.harness import random_hermitian

rng = np.random.default_rng(5)
x = random_hermitian(3, rng)
dv = double(x)
print("x_hat symmetric:", is_symmetric(dv.hat_x))
print("||x_hat||_2^2 =", lp_power(dv.hat_x, 2), " 2 var(x) =", 2 * variance(x))

rep = weak_symmetrization_verify(x, 0.8, 0.0)
for b in rep.bounds:
    print(f"  {b.label}: {b.lhs:.4f} <= {b.rhs:.4f}")

rep = lp_symmetrization_verify(x, 0.0, 3)
for b in rep.bounds:
    print(f"  {b.label}: {b.lhs:.4f} <= {b.rhs:.4f}")

xs = [random_hermitian(2, rng) for _ in range(3)]
rep = strong_symmetrization_verify(xs, 0.5)
print("maximal symmetrization:", round(rep.lhs + 0.0, 4), "<=", round(rep.rhs, 4), "holds:", rep.holds)
