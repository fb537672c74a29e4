"""Linear functionals of the prior and the empirical Bayes targets.

A linear functional is L(G) = int psi(mu) dG(mu) for a fixed weight
function psi.  The catalogue covers the quantities needed both as direct
estimands (marginal density, prior tail probability, prior density) and
as building blocks of the ratio targets theta(x) = A_G / F_G: the
posterior-mean numerator int mu phi(x - mu) dG, the local-false-sign-rate
numerator int 1{mu >= 0} phi(x - mu) dG, and the calibration functional

    Delta_G(x) = (A_G - theta_bar * F_G) / F_bar,

the Taylor linearization of theta around pilot values (theta_bar, F_bar).
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from . import priors

_INNER_NUMERATOR = {"posterior_mean": "posterior_mean_numerator",
                    "lfsr": "lfsr_numerator"}


@dataclass(frozen=True)
class LinearFunctional:
    """Tagged description of one linear functional L(G).

    Fields other than `kind` are meaningful only for the kinds that use
    them; unused ones stay None.
    """

    kind: str
    x: float | None = None
    threshold: float | None = None
    pilot_theta: float | None = None
    pilot_density: float | None = None
    numerator: "LinearFunctional | None" = None
    denominator: "LinearFunctional | None" = None

    def describe(self):
        if self.kind == "marginal_density":
            return f"marginal_density(x={self.x})"
        if self.kind == "prior_tail_prob":
            return f"prior_tail_prob(threshold={self.threshold})"
        if self.kind == "prior_density":
            return f"prior_density(x={self.x})"
        if self.kind in ("posterior_mean_numerator", "lfsr_numerator"):
            return f"{self.kind}(x={self.x})"
        if self.kind == "calibrated_delta":
            return (f"calibrated_delta(x={self.x}, inner={self.numerator.kind},"
                    f" pilot_theta={self.pilot_theta:.6g},"
                    f" pilot_density={self.pilot_density:.6g})")
        return self.kind


def marginal_density_at(x):
    """F_G = f_G(x), the marginal density of X at x."""
    return LinearFunctional("marginal_density", x=float(x))


def prior_tail_prob(threshold=0.0):
    """P_G[mu >= threshold]."""
    return LinearFunctional("prior_tail_prob", threshold=float(threshold))


def prior_density_at(x):
    """g(x), the prior density at x (classes with Lebesgue densities)."""
    return LinearFunctional("prior_density", x=float(x))


def posterior_mean_numerator(x):
    """A_G = int mu phi(x - mu) dG(mu)."""
    return LinearFunctional("posterior_mean_numerator", x=float(x))


def lfsr_numerator(x):
    """A_G = int 1{mu >= 0} phi(x - mu) dG(mu)."""
    return LinearFunctional("lfsr_numerator", x=float(x))


def calibrated_delta_functional(x, pilot_theta, pilot_density, inner_kind):
    """Linearized ratio correction Delta_G(x) = (A_G - theta_bar F_G) / F_bar.

    Parameters
    ----------
    x : float
        Evaluation point of the target.
    pilot_theta : float
        Pilot estimate theta_bar of theta(x).
    pilot_density : float
        Pilot estimate F_bar of the marginal density; must be positive.
    inner_kind : str
        "posterior_mean" or "lfsr".
    """
    if pilot_density <= 0:
        raise ValueError("pilot marginal density must be positive")
    if inner_kind not in _INNER_NUMERATOR:
        raise ValueError(f"unknown target kind {inner_kind!r}")
    num = LinearFunctional(_INNER_NUMERATOR[inner_kind], x=float(x))
    return LinearFunctional(
        "calibrated_delta", x=float(x),
        pilot_theta=float(pilot_theta), pilot_density=float(pilot_density),
        numerator=num, denominator=marginal_density_at(x))


@dataclass(frozen=True)
class EBTarget:
    """Ratio target theta(x) = A_G / F_G.

    kind is "posterior_mean" (h(mu) = mu) or "lfsr", the latter reported
    as theta(x) = P[mu >= 0 | X = x].
    """

    kind: str
    x: float

    def __post_init__(self):
        if self.kind not in _INNER_NUMERATOR:
            raise ValueError(f"unknown target kind {self.kind!r}")

    @property
    def numerator(self):
        return LinearFunctional(_INNER_NUMERATOR[self.kind], x=self.x)

    @property
    def denominator(self):
        return marginal_density_at(self.x)


def posterior_mean_target(x):
    return EBTarget("posterior_mean", float(x))


def lfsr_target(x):
    return EBTarget("lfsr", float(x))


def _mixture_value(prior, functional):
    # Per-component Gaussian conjugacy; see GaussianMixtureClass for the
    # common-tau specialization of the same formulas.
    w, mu, sd = prior.weights, prior.means, prior.sds
    kind = functional.kind
    if kind == "marginal_density":
        return float(prior.marginal_density(np.float64(functional.x)))
    if kind == "prior_tail_prob":
        return float(w @ norm.cdf((mu - functional.threshold) / sd))
    if kind == "prior_density":
        return float(w @ norm.pdf(functional.x, mu, sd))
    s2 = sd ** 2
    lik = norm.pdf(functional.x, mu, np.sqrt(1.0 + s2))
    post_mean = (s2 * functional.x + mu) / (1.0 + s2)
    if kind == "posterior_mean_numerator":
        return float(w @ (lik * post_mean))
    if kind == "lfsr_numerator":
        post_sd = np.sqrt(s2 / (1.0 + s2))
        return float(w @ (lik * norm.cdf(post_mean / post_sd)))
    raise ValueError(f"unsupported functional kind {kind!r}")


def functional_value(prior, functional):
    """Evaluate L(G) at a concrete prior.

    Gaussian mixtures use per-component closed forms; Hermite-expansion
    priors use the class coefficient vectors (quadrature against the
    basis), so the value is linear in the prior parameters either way.
    """
    if functional.kind == "calibrated_delta":
        a = functional_value(prior, functional.numerator)
        f = functional_value(prior, functional.denominator)
        return (a - functional.pilot_theta * f) / functional.pilot_density
    if isinstance(prior, priors.GaussianMixture):
        return _mixture_value(prior, functional)
    if isinstance(prior, priors.HermiteSobolevPrior):
        spec = priors.HermiteSobolevClass(prior.order, prior.sobolev_radius,
                                          nonneg_grid=prior.nonneg_grid)
        return float(spec.functional_coefficients(functional)
                     @ prior.coefficients)
    raise TypeError(f"unsupported prior type {type(prior).__name__}")


def eb_target_value(prior, target):
    """theta(x) = A_G / F_G for a concrete prior."""
    f = functional_value(prior, target.denominator)
    if f <= 0:
        raise ValueError("marginal density vanishes at the target point")
    return functional_value(prior, target.numerator) / f


def functional_from_config(config):
    """Build a target description from its JSON configuration dict.

    Returns either a LinearFunctional (direct linear targets) or an
    EBTarget (ratio targets handled by the calibration pipeline).
    """
    kind = config["target"]
    if kind == "marginal_density":
        return marginal_density_at(config["x"])
    if kind == "prior_tail_prob":
        return prior_tail_prob(config.get("threshold", 0.0))
    if kind == "prior_density":
        return prior_density_at(config["x"])
    if kind == "posterior_mean":
        return EBTarget("posterior_mean", config["x"])
    if kind == "lfsr":
        return EBTarget("lfsr", config["x"])
    raise ValueError(f"unknown target {kind!r}")
