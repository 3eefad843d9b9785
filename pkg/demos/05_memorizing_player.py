"""
A player that memorizes the sample
==================================

The first player can label every sampled input 0 (or 1) and fall back to the
indicator of [1, 2] everywhere else; the other two choose between the
indicators of [0, 1) and [1, 2]. Tolerance is 1/2, so the fallback already
satisfies every user in the population.
"""
from predgame import (draw_sample, empirical_payoffs, enumerate_pure_nash, example41_distribution, make_example41,
                      monte_carlo_payoffs, simulate_claim_a6)

sample = draw_sample(example41_distribution(), 20, seed=3)
ex = make_example41(sample, mode="rational")
print("labels equal to 1:", int(sample.y.sum()), "of", sample.m)
print("empirical payoffs:", [str(v) for v in empirical_payoffs(ex.game, ex.profile)])
print("constructed profile is an empirical equilibrium:", ex.profile in enumerate_pure_nash(ex.game))

# %%
# Away from the sample every player satisfies every user, so the population
# payoffs are an even three-way split.
est = monte_carlo_payoffs(ex.distribution, ex.profile, 10 ** 5, seed=0)
print("population payoffs:", est.mean, "stderr:", est.stderr)

# %%
# The coin-flip fact behind the construction: with 15 fair flips the mean
# lands strictly between 1/2 and 3/4 with probability 247/512.
print("Pr(1/2 < mean < 3/4) ~", simulate_claim_a6(10 ** 5, 15, seed=0))
