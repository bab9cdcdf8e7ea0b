"""
Operators as random variables
=============================

A Hermitian matrix plays the role of a real random variable; the normalized
trace plays the role of expectation.  Its distribution is the list of
eigenvalues weighted by multiplicity / dimension.
"""

import numpy as np

from qprob import BorelInterval, distribution, make_hermitian, median, spectral_projection, spectral_weight

# a 4x4 "random variable" with eigenvalues 1, 2, 3, 4 in a rotated basis
rng = np.random.default_rng(0)
q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
x = make_hermitian(q @ np.diag([1.0, 2.0, 3.0, 4.0]) @ q.T, tol_herm=1e-9)
print("distribution:", distribution(x).atoms)

# events are spectral projections; their traces are probabilities
tail = spectral_projection(x, BorelInterval.above(2.5))
print("tau(e_(2.5, inf)(x)) =", tail.trace())
print("same number without building the projection:", spectral_weight(x, BorelInterval.above(2.5)))

# the median is the largest m whose upper tail [m, inf) still carries mass 1/2
print("median:", median(x))
