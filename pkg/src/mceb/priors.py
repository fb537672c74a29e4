"""Effect-size priors and the two convex prior classes.

Two concrete families are supported:

* Gaussian location mixtures with common component standard deviation,
  mixing over a symmetric location grid.  Membership is the probability
  simplex over the grid weights.
* Densities spanned by the first p+1 Hermite functions, constrained to a
  first-order Sobolev ellipsoid, normalized and pointwise nonnegative on a
  finite grid.

Noise is a standard normal throughout: the marginal density of an
observation is the convolution of the standard normal density with the
prior.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from . import hermite
from .quadrature import cell_nodes, panel_nodes

NONNEG_SLACK = 1e-9


@dataclass(frozen=True)
class LocationGrid:
    """Symmetric grid {j * K / p : j = -p..p} of mixture locations."""

    half_width: float
    resolution: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.resolution < 1:
            raise ValueError("resolution must be a positive integer")

    @property
    def points(self):
        p = self.resolution
        return np.arange(-p, p + 1) * (self.half_width / p)

    @property
    def size(self):
        return 2 * self.resolution + 1


class GaussianMixture:
    """Finite Gaussian mixture sum_j w_j N(mean_j, sd_j^2).

    General component standard deviations are allowed so that simulation
    ground truths (which need not share a common sd) use the same closed
    forms as class members.
    """

    def __init__(self, means, sds, weights):
        means = np.atleast_1d(np.asarray(means, dtype=float))
        sds = np.broadcast_to(np.asarray(sds, dtype=float), means.shape).copy()
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if means.shape != weights.shape:
            raise ValueError("means and weights must have matching shapes")
        if np.any(weights < -1e-12):
            raise ValueError("negative mixture weight")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")
        if np.any(sds <= 0):
            raise ValueError("component sds must be positive")
        self.means = means
        self.sds = sds
        self.weights = weights

    def density(self, mu):
        """Prior (mixing) density g at mu."""
        mu = np.asarray(mu, dtype=float)
        comp = norm.pdf(mu[..., None], self.means, self.sds)
        return comp @ self.weights

    def marginal_density(self, x):
        """Marginal density of X = mu + N(0, 1) at x."""
        x = np.asarray(x, dtype=float)
        s = np.sqrt(1.0 + self.sds ** 2)
        comp = norm.pdf(x[..., None], self.means, s)
        return comp @ self.weights

    def marginal_cdf(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(1.0 + self.sds ** 2)
        comp = norm.cdf(x[..., None], self.means, s)
        return comp @ self.weights

    def bin_masses(self, bins):
        """Exact mass of the marginal in every cell of a bin grid."""
        cdf = self.marginal_cdf(bins.breakpoints)
        masses = np.empty(bins.n_cells)
        masses[0] = cdf[0]
        masses[1:-1] = np.diff(cdf)
        masses[-1] = 1.0 - cdf[-1]
        return masses

    def posterior_mean(self, x):
        """E[mu | X = x] by per-component conjugacy."""
        x = np.asarray(x, dtype=float)
        s2 = self.sds ** 2
        s = np.sqrt(1.0 + s2)
        lik = norm.pdf(x[..., None], self.means, s) * self.weights
        post_mean = (s2 * x[..., None] + self.means) / (1.0 + s2)
        return (lik * post_mean).sum(axis=-1) / lik.sum(axis=-1)

    def positive_prob(self, x):
        """P[mu >= 0 | X = x] by per-component conjugacy."""
        x = np.asarray(x, dtype=float)
        s2 = self.sds ** 2
        s = np.sqrt(1.0 + s2)
        lik = norm.pdf(x[..., None], self.means, s) * self.weights
        post_mean = (s2 * x[..., None] + self.means) / (1.0 + s2)
        post_sd = np.sqrt(s2 / (1.0 + s2))
        return (lik * norm.cdf(post_mean / post_sd)).sum(axis=-1) / lik.sum(axis=-1)

    def sample(self, n, rng):
        """Draw n observations X = mu + N(0, 1)."""
        idx = rng.choice(len(self.weights), size=n, p=self.weights / self.weights.sum())
        mu = rng.normal(self.means[idx], self.sds[idx])
        return mu + rng.standard_normal(n)


class GaussianMixturePrior(GaussianMixture):
    """Member of a Gaussian-mixture prior class: grid locations, common tau."""

    def __init__(self, grid, tau, weights):
        super().__init__(grid.points, np.full(grid.size, float(tau)), weights)
        self.grid = grid
        self.tau = float(tau)

    @property
    def params(self):
        return self.weights


class HermiteSobolevPrior:
    """Prior with density g = sum_j alpha_j h_j in the Hermite basis."""

    def __init__(self, coefficients, sobolev_radius, nonneg_grid):
        alpha = np.asarray(coefficients, dtype=float)
        self.coefficients = alpha
        self.order = len(alpha) - 1
        self.sobolev_radius = float(sobolev_radius)
        self.nonneg_grid = np.asarray(nonneg_grid, dtype=float)
        total = float(hermite.normalization_coefficients(self.order) @ alpha)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"coefficients integrate to {total}, expected 1")
        vals = self.density(self.nonneg_grid)
        if vals.min() < -1e-6:
            raise ValueError("density negative on the nonnegativity grid")
        rows = hermite.sobolev_ellipsoid_rows(self.order)
        if float(np.sum((rows @ alpha) ** 2)) > 2.0 * self.sobolev_radius + 1e-6:
            raise ValueError("Sobolev ellipsoid constraint violated")

    @property
    def params(self):
        return self.coefficients

    def density(self, mu):
        h = hermite.hermite_functions(self.order, np.asarray(mu, dtype=float))
        return np.tensordot(self.coefficients, h, axes=1)

    def marginal_density(self, x):
        conv = hermite.gauss_conv_hermite_all(self.order, np.asarray(x, dtype=float))
        return np.tensordot(self.coefficients, conv, axes=1)

    def bin_masses(self, bins):
        spec = HermiteSobolevClass(self.order, self.sobolev_radius,
                                   nonneg_grid=self.nonneg_grid)
        return spec.bin_mass_matrix(bins) @ self.coefficients


class GaussianMixtureClass:
    """Convex class of grid Gaussian mixtures with fixed component sd."""

    def __init__(self, tau, support, grid_points=120):
        self.tau = float(tau)
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        self.grid = LocationGrid(float(support), int(grid_points))

    @property
    def dim(self):
        return self.grid.size

    @property
    def marginal_sd(self):
        return np.sqrt(1.0 + self.tau ** 2)

    def prior(self, weights):
        return GaussianMixturePrior(self.grid, self.tau, weights)

    def uniform_prior(self):
        return self.prior(np.full(self.dim, 1.0 / self.dim))

    def prior_from_solution(self, params):
        """Prior from a solver primal vector, cleaned of tolerance dust."""
        w = np.clip(np.asarray(params, dtype=float), 0.0, None)
        return self.prior(w / w.sum())

    def bin_mass_matrix(self, bins):
        """Matrix N with N[k, j] = mass of component j's marginal in cell k."""
        key = (bins.boundary, bins.n_interior)
        cache = getattr(self, "_bmm_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_bmm_cache", cache)
        if key in cache:
            return cache[key]
        cdf = norm.cdf(bins.breakpoints[:, None], self.grid.points[None, :],
                       self.marginal_sd)
        mat = np.empty((bins.n_cells, self.dim))
        mat[0] = cdf[0]
        mat[1:-1] = np.diff(cdf, axis=0)
        mat[-1] = 1.0 - cdf[-1]
        cache[key] = mat
        return mat

    def marginal_density_matrix(self, x):
        """Matrix with entry [i, j] = component j's marginal density at x_i."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return norm.pdf(x[:, None], self.grid.points[None, :], self.marginal_sd)

    def functional_coefficients(self, functional):
        """Coefficient vector l with L(G) = l @ weights for this class."""
        mu = self.grid.points
        tau2 = self.tau ** 2
        kind = functional.kind
        if kind == "marginal_density":
            return norm.pdf(functional.x, mu, self.marginal_sd)
        if kind == "prior_tail_prob":
            return norm.cdf((mu - functional.threshold) / self.tau)
        if kind == "prior_density":
            return norm.pdf(functional.x, mu, self.tau)
        if kind == "posterior_mean_numerator":
            lik = norm.pdf(functional.x, mu, self.marginal_sd)
            post_mean = (tau2 * functional.x + mu) / (1.0 + tau2)
            return lik * post_mean
        if kind == "lfsr_numerator":
            lik = norm.pdf(functional.x, mu, self.marginal_sd)
            post_mean = (tau2 * functional.x + mu) / (1.0 + tau2)
            post_sd = np.sqrt(tau2 / (1.0 + tau2))
            return lik * norm.cdf(post_mean / post_sd)
        if kind == "calibrated_delta":
            num = self.functional_coefficients(functional.numerator)
            den = self.functional_coefficients(functional.denominator)
            return (num - functional.pilot_theta * den) / functional.pilot_density
        raise ValueError(f"unsupported functional kind {kind!r}")

    def emit_membership(self, builder, sl, label_prefix):
        """Probability-simplex constraints for the weight block `sl`."""
        n = builder.n
        idx = np.arange(n)[sl]
        A = np.zeros((len(idx), n))
        A[np.arange(len(idx)), idx] = -1.0
        builder.add_inequality_block(A, np.zeros(len(idx)),
                                     f"{label_prefix}:nonneg")
        a = np.zeros(n)
        a[idx] = 1.0
        builder.add_equality(a, 1.0, f"{label_prefix}:sum")

    def contains(self, prior, tol=1e-8):
        w = prior.params
        return bool(w.min() >= -tol and abs(w.sum() - 1.0) <= tol)


class HermiteSobolevClass:
    """Convex class of Hermite-expansion densities in a Sobolev ellipsoid."""

    def __init__(self, truncation=32, sobolev_radius=0.5, nonneg_points=201,
                 nonneg_range=8.0, nonneg_grid=None):
        self.order = int(truncation)
        self.sobolev_radius = float(sobolev_radius)
        if nonneg_grid is not None:
            self.nonneg_grid = np.asarray(nonneg_grid, dtype=float)
        else:
            self.nonneg_grid = np.linspace(-nonneg_range, nonneg_range,
                                           int(nonneg_points))
        self._norm_coefs = hermite.normalization_coefficients(self.order)
        self._ellipsoid_rows = hermite.sobolev_ellipsoid_rows(self.order)

    @property
    def dim(self):
        return self.order + 1

    def prior(self, coefficients):
        return HermiteSobolevPrior(coefficients, self.sobolev_radius,
                                   self.nonneg_grid)

    def prior_from_solution(self, params):
        """Prior from a solver primal vector, renormalized to unit mass."""
        alpha = np.asarray(params, dtype=float)
        return self.prior(alpha / float(self._norm_coefs @ alpha))

    def bin_mass_matrix(self, bins, tail_cut=12.0):
        """Per-basis-function masses of the marginal in every cell.

        Interior cells use per-cell Gauss-Legendre quadrature of the
        closed-form convolution; the unbounded tail cells are integrated
        on [-M - tail_cut, -M] and [M, M + tail_cut] (the integrand decays
        like exp(-x^2/4), so the truncation error is negligible).
        """
        key = (bins.boundary, bins.n_interior, tail_cut)
        cache = getattr(self, "_bmm_cache", None)
        if cache is None:
            cache = {}
            self._bmm_cache = cache
        if key in cache:
            return cache[key]
        mat = np.empty((bins.n_cells, self.dim))
        nodes, weights = cell_nodes(bins.breakpoints, order=64)
        conv = hermite.gauss_conv_hermite_all(self.order, nodes)
        mat[1:-1] = (conv * weights).sum(axis=2).T
        m_lo, m_hi = bins.breakpoints[0], bins.breakpoints[-1]
        lo_nodes, lo_w = panel_nodes(m_lo - tail_cut, m_lo, 0.5, 32)
        hi_nodes, hi_w = panel_nodes(m_hi, m_hi + tail_cut, 0.5, 32)
        mat[0] = hermite.gauss_conv_hermite_all(self.order, lo_nodes) @ lo_w
        mat[-1] = hermite.gauss_conv_hermite_all(self.order, hi_nodes) @ hi_w
        cache[key] = mat
        return mat

    def functional_coefficients(self, functional, tail_cut=18.0):
        kind = functional.kind
        if kind == "marginal_density":
            return hermite.gauss_conv_hermite_all(self.order,
                                                  np.float64(functional.x))
        if kind == "prior_density":
            return hermite.hermite_functions(self.order, np.float64(functional.x))
        if kind == "prior_tail_prob":
            lo = functional.threshold
            nodes, w = panel_nodes(lo, max(lo, 0.0) + tail_cut, 0.25, 32)
            return hermite.hermite_functions(self.order, nodes) @ w
        if kind == "posterior_mean_numerator":
            x = functional.x
            nodes, w = panel_nodes(-tail_cut, tail_cut, 0.25, 32)
            integrand = nodes * norm.pdf(x - nodes)
            return hermite.hermite_functions(self.order, nodes) @ (w * integrand)
        if kind == "lfsr_numerator":
            x = functional.x
            nodes, w = panel_nodes(0.0, max(x, 0.0) + tail_cut, 0.25, 32)
            integrand = norm.pdf(x - nodes)
            return hermite.hermite_functions(self.order, nodes) @ (w * integrand)
        if kind == "calibrated_delta":
            num = self.functional_coefficients(functional.numerator)
            den = self.functional_coefficients(functional.denominator)
            return (num - functional.pilot_theta * den) / functional.pilot_density
        raise ValueError(f"unsupported functional kind {kind!r}")

    def emit_membership(self, builder, sl, label_prefix):
        """Normalization, grid nonnegativity and the Sobolev cone."""
        n = builder.n
        idx = np.arange(n)[sl]
        a = np.zeros(n)
        a[idx] = self._norm_coefs
        builder.add_equality(a, 1.0, f"{label_prefix}:normalization")
        hvals = hermite.hermite_functions(self.order, self.nonneg_grid)
        A = np.zeros((len(self.nonneg_grid), n))
        A[:, idx] = -hvals.T
        builder.add_inequality_block(
            A, np.full(len(self.nonneg_grid), NONNEG_SLACK),
            f"{label_prefix}:nonneg")
        A = np.zeros((self._ellipsoid_rows.shape[0], n))
        A[:, idx] = self._ellipsoid_rows
        builder.add_soc(A, np.zeros(A.shape[0]), np.zeros(n),
                        np.sqrt(2.0 * self.sobolev_radius),
                        f"{label_prefix}:sobolev")

    def contains(self, prior, tol=1e-8):
        alpha = prior.params
        if abs(self._norm_coefs @ alpha - 1.0) > tol:
            return False
        hvals = hermite.hermite_functions(self.order, self.nonneg_grid)
        if (alpha @ hvals).min() < -NONNEG_SLACK - tol:
            return False
        return float(np.sum((self._ellipsoid_rows @ alpha) ** 2)) \
            <= 2.0 * self.sobolev_radius + tol


def prior_class_from_config(config):
    """Build a prior class from its JSON configuration dict."""
    kind = config.get("type")
    if kind == "gauss_mix":
        return GaussianMixtureClass(
            tau=config["tau"], support=config["support"],
            grid_points=config.get("grid_points", 120))
    if kind == "sobolev":
        if config.get("order", 1) != 1:
            raise ValueError("only Sobolev order 1 is supported")
        return HermiteSobolevClass(
            truncation=config.get("truncation", 32),
            sobolev_radius=config["radius"],
            nonneg_points=config.get("nonneg_points", 201),
            nonneg_range=config.get("nonneg_range", 8.0))
    raise ValueError(f"unknown prior class type {kind!r}")
