"""Delta tuning, folded-normal half-widths, and the estimation pipeline
for linear functionals.

The confidence interval for a biased Gaussian estimate is L_hat +/-
t_alpha(B, V) where t_alpha(B, V) = sqrt(V) cv_alpha(B/sqrt(V)) and
cv_alpha(u) is the 1-alpha quantile of |N(u, 1)|: the interval covers as
long as the true absolute bias is at most B.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from .modulus import build_estimator, delta_max, solve_modulus

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

TRACE_COLUMNS = ("delta", "omega", "omega_prime", "max_bias",
                 "variance_proxy", "criterion")


def cv_alpha(u, alpha):
    """1 - alpha quantile of |N(u, 1)| for u >= 0.

    Solves Phi(t - u) - Phi(-t - u) = 1 - alpha by root bracketing on
    [max(u, z_{1-alpha/2}), u + z_{1-alpha/2} + 10] to 1e-9.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if u < 0:
        raise ValueError("u must be nonnegative")
    z = norm.ppf(1.0 - alpha / 2.0)

    def gap(t):
        return norm.cdf(t - u) - norm.cdf(-t - u) - (1.0 - alpha)

    lo = max(u, z)
    if gap(lo) >= 0.0:
        return lo
    return float(brentq(gap, lo, u + z + 10.0, xtol=1e-9))


def bias_aware_halfwidth(B, V, alpha):
    """t_alpha(B, V) = sqrt(V) cv_alpha(B / sqrt(V)); equals B when V = 0."""
    if B < 0 or V < 0:
        raise ValueError("bias bound and variance must be nonnegative")
    if V == 0.0:
        return float(B)
    s = math.sqrt(V)
    return s * cv_alpha(B / s, alpha)


def split_sample(samples, seed):
    """Seeded random split: first ceil(n/2) of a permutation is fold 1."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < 4:
        raise ValueError("need at least 4 samples to split")
    perm = np.random.default_rng(seed).permutation(n)
    n1 = (n + 1) // 2
    return samples[perm[:n1]], samples[perm[n1:]]


@dataclass(frozen=True)
class BiasAwareInterval:
    estimate: float
    half_width: float
    max_bias: float
    variance: float
    alpha: float
    q0: float = 0.0
    q_mean: float = 0.0
    m: int = 0

    @property
    def lower(self):
        return self.estimate - self.half_width

    @property
    def upper(self):
        return self.estimate + self.half_width


def estimate_and_interval(estimator, fold2_samples, alpha):
    """Algorithm step: point estimate, variance, bias-aware interval.

    The variance estimate is the unbiased sample variance of the weights
    Q(X_i) over the estimation fold, divided by the fold size.
    """
    fold2_samples = np.asarray(fold2_samples, dtype=float)
    m2 = len(fold2_samples)
    if m2 < 2:
        raise ValueError("estimation fold must contain at least 2 samples")
    qvals = estimator.weights_at(fold2_samples)
    q_mean = float(qvals.mean())
    estimate = estimator.q0 + q_mean
    variance = float(qvals.var(ddof=1)) / m2
    half = bias_aware_halfwidth(estimator.max_bias, variance, alpha)
    return BiasAwareInterval(estimate=estimate, half_width=half,
                             max_bias=estimator.max_bias, variance=variance,
                             alpha=alpha, q0=estimator.q0, q_mean=q_mean,
                             m=m2)


@dataclass(frozen=True)
class TuningResult:
    criterion: str
    delta: float
    value: float
    trace: list
    delta_min: float
    delta_max: float
    degenerate: bool
    solution: object
    estimator: object


def tune_delta(class_spec, pilot, functional, m, alpha=0.05,
               criterion="MSE", max_evals=40, rel_tol=1e-3, n_coarse=8,
               localized=True):
    """Pick delta on [delta_min, delta_max] minimizing the chosen criterion.

    criterion "MSE" minimizes B_hat^2 + Gamma; "CIWidth" minimizes the
    bias-aware half-width at level alpha.  An 8-point log-spaced scan
    brackets the optimum (the criteria are unimodal in practice but this
    is not assumed); golden-section search refines within the bracket.
    Ties break toward larger delta (lower variance).
    """
    if criterion not in ("MSE", "CIWidth"):
        raise ValueError(f"unknown criterion {criterion!r}")
    d_min = pilot.c_m * math.sqrt(math.log(m) / m)
    d_max = delta_max(class_spec, pilot, functional, localized=localized)
    trace = []
    cache = {}

    def evaluate(delta):
        if delta not in cache:
            sol = solve_modulus(class_spec, pilot, functional, delta,
                                localized=localized)
            est = build_estimator(sol, pilot, functional, m)
            if criterion == "MSE":
                val = est.max_bias ** 2 + est.gamma
            else:
                val = bias_aware_halfwidth(est.max_bias, est.gamma, alpha)
            trace.append((delta, sol.omega, sol.omega_prime, est.max_bias,
                          est.gamma, val))
            cache[delta] = (val, sol, est)
        return cache[delta][0]

    if d_min >= d_max:
        # localized class so tight the search range collapses
        val = evaluate(d_max)
        _, sol, est = cache[d_max]
        return TuningResult(criterion, d_max, val, trace, d_min, d_max,
                            degenerate=True, solution=sol, estimator=est)

    coarse = np.geomspace(d_min, d_max, n_coarse)
    best = 0
    for i, delta in enumerate(coarse):
        if evaluate(delta) <= cache[coarse[best]][0]:
            best = i
    a = coarse[max(best - 1, 0)]
    b = coarse[min(best + 1, n_coarse - 1)]

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    budget = max_evals - n_coarse
    while budget > 0 and (b - a) > rel_tol * b:
        if evaluate(c) < evaluate(d):
            b, d = d, c
            c = b - GOLDEN * (b - a)
        else:
            a, c = c, d
            d = a + GOLDEN * (b - a)
        budget -= 1

    best_delta = None
    best_val = math.inf
    for delta in sorted(cache):
        val = cache[delta][0]
        if val <= best_val + 1e-15:
            best_val, best_delta = min(val, best_val), delta
    _, sol, est = cache[best_delta]
    return TuningResult(criterion, best_delta, best_val, trace, d_min,
                        d_max, degenerate=False, solution=sol, estimator=est)
