import numpy as np
import pytest
from scipy.stats import norm

from mceb import fourier
from mceb.pilot import BinGrid, default_bandwidth, kde_evaluate
from mceb.scenarios import bimodal_prior


def test_default_bandwidths():
    bw = fourier.bc_default_bandwidths(10000)
    h = 1.0 / np.sqrt(np.log(10000))
    assert bw["marginal_density"] == pytest.approx(h)
    assert bw["prior_density"] == pytest.approx(np.sqrt(2.0) * h)
    with pytest.raises(ValueError):
        fourier.bc_default_bandwidths(2)


def test_marginal_density_weight_is_sinc_kernel():
    # truncating the inversion integral at 1/h reproduces the sinc KDE
    h = 0.5
    z = np.linspace(-3, 3, 13)
    w = fourier.bc_weight_values("marginal_density", 1.0, h, z)
    mask = np.abs(z - 1.0) > 1e-9
    expect = np.sin((z[mask] - 1.0) / h) / (np.pi * (z[mask] - 1.0))
    assert np.allclose(w[mask], expect, atol=1e-10)
    # removable singularity at z = x
    w0 = fourier.bc_weight_values("marginal_density", 1.0, h,
                                  np.array([1.0]))[0]
    assert abs(w0 - 1.0 / (np.pi * h)) < 1e-10


def test_bc_marginal_estimate_equals_sinc_kde():
    rng = np.random.default_rng(0)
    s = rng.normal(size=20)
    h = 0.4
    for x in (-1.0, 0.3, 2.0):
        bc = fourier.bc_estimate(s, "marginal_density", x, h)
        kde = float(kde_evaluate(s, "sinc", h, np.float64(x)))
        assert abs(bc - kde) < 1e-6


def test_single_sample_at_own_location():
    # w(x) at z = x is 1/(pi h) for the marginal density kind
    val = fourier.bc_estimate(np.array([0.0]), "marginal_density", 0.0, 1.0)
    assert abs(val - 1.0 / np.pi) < 1e-10
    with pytest.raises(ValueError):
        fourier.bc_estimate(np.array([]), "marginal_density", 0.0, 1.0)


def test_weight_integrals_are_real():
    # residual imaginary parts must cancel for every kind
    z = np.linspace(-4, 4, 9)
    for kind in fourier.KINDS:
        h = 0.6 if kind == "prior_density" else 0.45
        vals = fourier.bc_weight_values(kind, 0.7, h, z)
        assert np.isfinite(vals).all()


def test_lfsr_fourier_weight_decay():
    # |psi*(t)| exp(t^2/2) stays bounded after the 1/phi* correction is
    # applied and t is restricted to a fixed band
    t = np.linspace(-2.5, 2.5, 101)
    for x in (-2.0, 0.0, 2.0):
        w = fourier._fourier_weight("lfsr_numerator", x, t)
        assert np.isfinite(w).all()
        assert np.abs(w).max() < 50.0


def test_estimates_consistent_monte_carlo():
    # large-sample estimates land near the true functionals
    prior = bimodal_prior()
    rng = np.random.default_rng(1)
    m = 200000
    s = prior.sample(m, rng)
    bw = fourier.bc_default_bandwidths(m)
    x = 1.0
    f_true = float(prior.marginal_density(np.array([x]))[0])
    pm_true = float(prior.posterior_mean(np.array([x]))[0]) * f_true
    lfsr_true = float(prior.positive_prob(np.array([x]))[0]) * f_true
    est_f = fourier.bc_estimate(s, "marginal_density", x,
                                bw["marginal_density"])
    est_pm = fourier.bc_estimate(s, "posterior_mean_numerator", x,
                                 bw["posterior_mean_numerator"])
    est_l = fourier.bc_estimate(s, "lfsr_numerator", x, bw["lfsr_numerator"])
    assert abs(est_f - f_true) < 0.01
    assert abs(est_pm - pm_true) < 0.02
    assert abs(est_l - lfsr_true) < 0.02


def test_prior_density_estimate_recovers_smooth_prior():
    # deconvolution target: N(0, 1) effect sizes, density at 0
    rng = np.random.default_rng(2)
    m = 200000
    s = rng.normal(scale=np.sqrt(2.0), size=m)
    h = fourier.bc_default_bandwidths(m)["prior_density"]
    est = fourier.bc_estimate(s, "prior_density", 0.0, h)
    assert abs(est - norm.pdf(0.0)) < 0.05


def test_permutation_invariance():
    rng = np.random.default_rng(3)
    s = rng.normal(size=500)
    a = fourier.bc_estimate(s, "posterior_mean_numerator", 0.5, 0.4)
    b = fourier.bc_estimate(s[::-1], "posterior_mean_numerator", 0.5, 0.4)
    assert a == pytest.approx(b, abs=1e-12)


def test_bc_affine_estimator_matches_weights():
    bins = BinGrid(6.0, 40)
    est = fourier.bc_affine_estimator("marginal_density", 0.0, 0.4, bins,
                                      m=100)
    assert est.q.shape == (bins.n_cells,)
    # interior cell weights equal the weight function at midpoints
    mids = (bins.breakpoints[:-1] + bins.breakpoints[1:]) / 2.0
    expect = fourier.bc_weight_values("marginal_density", 0.0, 0.4, mids)
    assert np.allclose(est.q[1:-1], expect, atol=1e-12)
    assert est.q0 == 0.0


def test_pilot_theta_floor_and_clamp():
    rng = np.random.default_rng(4)
    s = rng.normal(size=2000)
    # far in the tail the marginal estimate collapses; floor kicks in
    theta, f_bar, a_bar = fourier.pilot_theta(s, 8.0, "posterior_mean",
                                              c_floor=0.05)
    assert f_bar == 0.05
    assert theta == pytest.approx(a_bar / 0.05)
    # lfsr pilot always lands in [0, 1]
    theta_l, f_l, _ = fourier.pilot_theta(s, 8.0, "lfsr", c_floor=0.05)
    assert 0.0 <= theta_l <= 1.0


def test_pilot_theta_near_truth():
    prior = bimodal_prior()
    rng = np.random.default_rng(5)
    s = prior.sample(50000, rng)
    x = 1.5
    truth = float(prior.posterior_mean(np.array([x]))[0])
    theta, f_bar, _ = fourier.pilot_theta(s, x, "posterior_mean",
                                          c_floor=0.01)
    assert abs(theta - truth) < 0.1
    assert f_bar > 0.01


def test_invalid_arguments():
    with pytest.raises(ValueError):
        fourier.bc_weight_values("marginal_density", 0.0, 0.0, [1.0])
    with pytest.raises(ValueError):
        fourier._fourier_weight("mode", 0.0, np.array([0.0]))
