"""
How many users are enough?
==========================

The sufficient sample size grows like d / epsilon^2 times a log factor. At
that size the uniform-convergence bound drops below delta. Learn-then-play
draws that many users and runs epsilon/2 dynamics on them; here a cap keeps
the run small, which voids the population guarantee.
"""
from predgame import (learn_equilibrium, regression_market, required_sample_size, uniform_convergence_bound,
                      verify_epsilon_pne)

for eps in (0.5, 0.2, 0.1):
    m = required_sample_size(eps, 0.1, 2, 2)
    print(f"epsilon={eps}: m={m}, bound at m = {uniform_convergence_bound(eps, 2, 2, m):.2e}")

scenario = regression_market()
res = learn_equilibrium(scenario.distribution, scenario.classes, 0.2, 0.1, seed=0, m_cap=500)
print(f"required {res.m_required} users, used {res.m_used} (capped={res.capped})")
print("profile:", res.profile)
print("empirical 0.1-equilibrium:", bool(verify_epsilon_pne(res.game, res.profile, 0.1)))
