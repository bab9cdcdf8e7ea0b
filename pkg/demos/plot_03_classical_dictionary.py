"""
Classical variables as diagonal matrices
========================================

A discrete variable with rational probabilities becomes a diagonal matrix
whose eigenvalue multiplicities reproduce the probabilities.  For such
commuting families every witness trace equals the probability of a
classical event, which we compute by exact enumeration.
"""

from fractions import Fraction

from qprob import ClassicalInstance, DiscreteVariable, classical_corollary_check, diagonal_embedding, exact_event_probability

rad = DiscreteVariable.rademacher()
inst = ClassicalInstance((rad, rad, rad))
fam = diagonal_embedding(inst)
print("embedded first variable:", fam.members[0].matrix.real.diagonal())

p = exact_event_probability(inst, lambda xs: max(xs[0], xs[0] + xs[1], sum(xs)) > Fraction(3, 2))
print("P(max S_k > 3/2) =", p)

for which in ("levy", "levy_abs"):
    rep = classical_corollary_check(inst, which, 1.5)
    print(f"{which}: {rep.lhs} <= {rep.rhs}; exact oracle holds={rep.details['exact_holds']}, "
          f"operator/oracle deviation {rep.details['max_agreement_deviation']:.1e}")

bern = DiscreteVariable.bernoulli()
rep = classical_corollary_check(ClassicalInstance((bern, bern)), "levy_skorohod", 0.4, 0.5)
print("levy_skorohod on a Bernoulli pair:", rep.lhs, "<=", rep.rhs)
