"""Fourier-inversion (deconvolution) estimators used as pilots.

For a linear functional L(G) = int psi(mu) dG(mu) with Fourier weight
psi*(t), the estimator truncates the inversion integral at |t| <= 1/h:

    L_hat = (1/(2 pi m)) sum_k int_{-1/h}^{1/h} exp(i t X_k)
            psi*(-t) / phi*(t) dt,        phi*(t) = exp(-t^2/2).

Equivalently L_hat = (1/m) sum_k w(X_k) for the weight function w below,
which is also what gets binned for worst-case-bias comparisons against
the minimax estimators.
"""

import numpy as np
from scipy.stats import norm

from .modulus import AffineEstimator
from .quadrature import panel_nodes

KINDS = ("marginal_density", "posterior_mean_numerator", "lfsr_numerator",
         "prior_density")


def bc_default_bandwidths(m):
    """Per-kind default bandwidths.

    The density (deconvolution) target needs the smaller cutoff
    (log m / 2)^{-1/2} because its Fourier weight grows like exp(t^2/2);
    the other targets use 1/sqrt(log m).
    """
    if m < 3:
        raise ValueError("need at least 3 samples for a bandwidth")
    h = 1.0 / np.sqrt(np.log(m))
    return {"marginal_density": h, "posterior_mean_numerator": h,
            "lfsr_numerator": h, "prior_density": np.sqrt(2.0 / np.log(m))}


def _fourier_weight(kind, x, t, tail_cut=12.0):
    """psi*(-t) / phi*(t) on an array of frequencies t."""
    if kind == "marginal_density":
        return np.exp(-1j * x * t)
    if kind == "posterior_mean_numerator":
        return np.exp(-1j * x * t) * (x - 1j * t)
    if kind == "prior_density":
        return np.exp(-1j * x * t + t ** 2 / 2.0)
    if kind == "lfsr_numerator":
        # psi*(t) = int_0^inf phi(x - mu) exp(i t mu) dmu by quadrature
        nodes, w = panel_nodes(0.0, max(0.0, x) + tail_cut, 0.5, 32)
        dens = w * norm.pdf(x - nodes)
        psi_neg = np.exp(-1j * np.outer(t, nodes)) @ dens
        return psi_neg * np.exp(t ** 2 / 2.0)
    raise ValueError(f"unsupported estimator kind {kind!r}")


def bc_weight_values(kind, x, h, points, points_per_unit=32):
    """Weight function w(z) = (1/2pi) int_{-1/h}^{1/h} e^{itz} psi*(-t)/phi*(t) dt.

    Evaluated at an array of observation values z.  The imaginary residue
    of the integral is checked to be negligible before it is dropped.
    """
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    points = np.atleast_1d(np.asarray(points, dtype=float))
    t, wt = panel_nodes(-1.0 / h, 1.0 / h, 1.0, points_per_unit)
    fw = wt * _fourier_weight(kind, x, t)
    vals = np.exp(1j * np.outer(points, t)) @ fw / (2.0 * np.pi)
    if np.abs(vals.imag).max() > 1e-6 * max(1.0, np.abs(vals.real).max()):
        raise ArithmeticError("Fourier weight integral is not real")
    return vals.real


def bc_estimate(samples, kind, x, h):
    """Truncated Fourier-inversion estimate of the functional at x."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        raise ValueError("empty sample")
    return float(bc_weight_values(kind, x, h, samples).mean())


def bc_affine_estimator(kind, x, h, bins, m):
    """Binned version of the Fourier estimator for bias comparisons.

    The weight function is frozen at cell midpoints (boundary values for
    the tail cells), giving a piecewise-constant estimator comparable to
    the minimax ones through the same worst-case-bias linear programs.
    The bias bound and variance proxy fields are left at zero; callers
    derive them from the comparison programs.
    """
    mids = np.empty(bins.n_cells)
    bp = bins.breakpoints
    mids[0], mids[-1] = bp[0], bp[-1]
    mids[1:-1] = (bp[:-1] + bp[1:]) / 2.0
    q = bc_weight_values(kind, x, h, mids)
    return AffineEstimator(q0=0.0, q=q, max_bias=0.0, gamma=0.0,
                           delta=np.nan, omega=np.nan, omega_prime=np.nan,
                           bins=bins, m=int(m))


def pilot_theta(samples, x, inner_kind, c_floor, h=None):
    """Pilot (theta_bar, F_bar, A_bar) for the ratio target at x.

    F_bar is floored at c_floor so the linearization never divides by a
    vanishing density; for the sign-probability target theta_bar is
    clamped to [0, 1].
    """
    samples = np.asarray(samples, dtype=float)
    m = len(samples)
    bw = bc_default_bandwidths(m)
    numerator_kind = {"posterior_mean": "posterior_mean_numerator",
                      "lfsr": "lfsr_numerator"}[inner_kind]
    h_num = h if h is not None else bw[numerator_kind]
    h_den = h if h is not None else bw["marginal_density"]
    a_bar = bc_estimate(samples, numerator_kind, x, h_num)
    f_bar = max(bc_estimate(samples, "marginal_density", x, h_den), c_floor)
    theta_bar = a_bar / f_bar
    if inner_kind == "lfsr":
        theta_bar = min(max(theta_bar, 0.0), 1.0)
    return theta_bar, f_bar, a_bar
