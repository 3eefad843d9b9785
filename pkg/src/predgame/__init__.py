"""Competing prediction algorithms: empirical games, potential dynamics and best responses."""
from .bounds import (LearnResult, learn_equilibrium, required_sample_size, sample_size_rhs,
                     uniform_convergence_bound)
from .dynamics import (DynamicsTrace, FiniteEnumeration, LinearBLR, ScheduleSpec, Verdict,
                       enumerate_pure_nash, epsilon_better_response_finite, max_iterations, potential,
                       run_dynamics, verify_epsilon_pne)
from .errors import ConfigError, InputError, OracleError, PredGameError, ResourceError, UnsupportedError
from .linear import (ABOVE, BELOW, FREE, ONE, FeasibilityResult, Region, best_linear_response,
                     enumerate_regions, pvf)
from .model import (Constant, EmpiricalGame, Example41Class1, FiniteList, IntervalIndicator, Linear,
                    LinearClass, MonteCarloEstimate, Sample, SampleOverride, UserPoint, empirical_payoffs,
                    monte_carlo_payoffs, payoff_weights, restriction_count, satisfies)
from .scenarios import (GaussianRegression, PointMass, Segment, UniformOverSample, UniformSegments,
                        draw_sample, example41_distribution, make_example41, regression_market,
                        simulate_claim_a6)

__version__ = "0.1.0"
