"""
Payoffs and the harmonic potential
==================================

Users are triples (x, y, t). A predictor satisfies a user when its
prediction lands within t of y, and every satisfied user splits one unit of
payoff equally among the players that satisfy it.
"""
from fractions import Fraction

import numpy as np

from predgame import (Constant, EmpiricalGame, FiniteList, Linear, Sample, empirical_payoffs, potential)

rng = np.random.default_rng(0)
X = np.round(rng.uniform(0, 1, (12, 1)), 2)
y = np.round(X[:, 0] + rng.normal(0, 0.2, 12), 2)
sample = Sample.from_arrays(X, y, np.full(12, 0.2))

members = (Constant(0.5), Linear((1.0,)), Linear((0.5,)))
game = EmpiricalGame(sample, [FiniteList(members)] * 3, mode="rational")

profile = (Linear((1.0,)), Linear((1.0,)), Constant(0.5))
print("payoffs:", [str(v) for v in empirical_payoffs(game, profile)])
print("potential:", potential(game, profile))

# %%
# A unilateral deviation changes the deviator's payoff by exactly the change
# in potential. In rational mode the two differences are identical fractions.
deviation = (Linear((1.0,)), Linear((0.5,)), Constant(0.5))
d_pay = empirical_payoffs(game, deviation)[1] - empirical_payoffs(game, profile)[1]
d_phi = potential(game, deviation) - potential(game, profile)
print("payoff change", d_pay, "potential change", d_phi, "equal:", d_pay == d_phi)
assert isinstance(d_phi, Fraction) and d_pay == d_phi
