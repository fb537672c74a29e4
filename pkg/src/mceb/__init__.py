"""Bias-aware inference for empirical Bayes estimands under Gaussian noise.

The package implements minimax-calibrated empirical Bayes (MCEB):
frequentist confidence intervals for linear functionals of an unknown
effect-size distribution in the deconvolution model mu ~ G,
X | mu ~ N(mu, 1), and, through Taylor-linearized calibration, for the
posterior mean and the local false sign rate.
"""

__version__ = "0.1.0"

from .functionals import (EBTarget, LinearFunctional,
                          calibrated_delta_functional, eb_target_value,
                          functional_value, lfsr_numerator, lfsr_target,
                          marginal_density_at, posterior_mean_numerator,
                          posterior_mean_target, prior_density_at,
                          prior_tail_prob)
from .intervals import (BiasAwareInterval, TuningResult,
                        bias_aware_halfwidth, cv_alpha,
                        estimate_and_interval, split_sample, tune_delta)
from .modulus import (AffineEstimator, EmptyLocalizedClass,
                      ModulusSolution, build_estimator,
                      build_modulus_program, delta_max, solve_modulus,
                      worst_case_bias_lp)
from .pilot import (BinGrid, PilotMarginal, build_pilot, default_bandwidth,
                    kde_evaluate, oracle_pilot, poisson_bootstrap_radius)
from .pipeline import MCEBResult, mceb_analyze, mceb_linear
from .priors import (GaussianMixture, GaussianMixtureClass,
                     GaussianMixturePrior, HermiteSobolevClass,
                     HermiteSobolevPrior, LocationGrid,
                     prior_class_from_config)
from .scenarios import benchmark_class, bimodal_prior, unimodal_prior

__all__ = [name for name in dir() if not name.startswith("_")]
