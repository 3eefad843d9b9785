"""
Best response in the linear class
=================================

For a linear player the best response is found by enumerating every
realizable assignment of users to "inside the slab", "above" and "below",
then keeping the assignment with the most remaining payoff.
"""
import numpy as np

from predgame import Constant, Linear, Sample, best_linear_response, enumerate_regions, pvf
from predgame.linear import region_string

sample = Sample.from_arrays(np.array([[1.0], [2.0]]), np.array([0.0, 2.0]), np.array([0.5, 0.5]))
print("realizable region vectors:", [region_string(v) for v in enumerate_regions(sample)])
print("both users at once?", bool(pvf(sample, (0, 0))))

# Two opponents already serve user 1, so user 2 is worth three times as much.
reply = best_linear_response(sample, [Constant(0), Constant(0)])
print("best reply", reply.hypothesis, "payoff", reply.payoff)

# %%
# In two dimensions with an intercept the enumeration still runs in
# polynomial time for a fixed dimension.
rng = np.random.default_rng(2)
X = rng.uniform(-1, 1, (9, 2))
y = X @ np.array([0.7, -0.4]) + 0.2 + rng.normal(0, 0.05, 9)
sample2 = Sample.from_arrays(X, y, np.full(9, 0.1))
reply = best_linear_response(sample2, [Linear((0.0, 0.0))], mode="floating", with_bias=True)
h = reply.hypothesis
print(f"with bias: slope {[round(float(c), 3) for c in h.coefficients]}, intercept {float(h.intercept):.3f}, "
      f"payoff {reply.payoff:.3f}")
