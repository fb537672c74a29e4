import numpy as np
import pytest

from mceb import functionals as fn
from mceb.pilot import BinGrid
from mceb.pipeline import MCEBResult, mceb_analyze, mceb_linear
from mceb.scenarios import bimodal_prior

CLASS = {"type": "gauss_mix", "tau": 0.2, "support": 3.0, "grid_points": 30}
BINS = BinGrid(6.0, 40)


@pytest.fixture(scope="module")
def samples():
    return bimodal_prior().sample(4000, np.random.default_rng(10))


def run(samples, **kw):
    base = dict(class_config=CLASS, target_xs=(1.0,),
                inner_kind="posterior_mean", alpha=0.1, seed=7, bins=BINS,
                bootstrap_reps=100)
    base.update(kw)
    return mceb_analyze(samples, **base)


def test_analyze_posterior_mean_near_truth(samples):
    prior = bimodal_prior()
    xs = (-1.0, 0.0, 1.0)
    res = run(samples, target_xs=xs)
    assert [r.x for r in res] == list(xs)
    for r in res:
        truth = float(prior.posterior_mean(np.array([r.x]))[0])
        assert r.lower <= r.estimate <= r.upper
        assert abs(r.estimate - truth) < 0.2
        assert r.lower - 1e-9 <= truth <= r.upper + 1e-9
        assert r.se >= 0.0 and r.max_bias >= 0.0
        assert r.c_m > 0.0
    # symmetric prior: the posterior mean at 0 is 0
    mid = res[1]
    assert abs(mid.estimate) < 0.1


def test_analyze_deterministic(samples):
    a = run(samples)[0]
    b = run(samples)[0]
    assert a.estimate == b.estimate and a.lower == b.lower
    c = run(samples, seed=8)[0]
    assert a.estimate != c.estimate


def test_interval_inflation_nesting(samples):
    r0 = run(samples, eta=0.0)[0]
    r1 = run(samples, eta=0.05)[0]
    assert r0.estimate == pytest.approx(r1.estimate, abs=1e-12)
    w0, w1 = r0.upper - r0.lower, r1.upper - r1.lower
    assert w1 == pytest.approx(1.05 * w0, rel=1e-9)
    assert r1.lower <= r0.lower and r0.upper <= r1.upper


def test_lfsr_results_clamped(samples):
    res = run(samples, target_xs=(-1.5, 0.0, 1.5), inner_kind="lfsr")
    for r in res:
        assert 0.0 <= r.lower <= r.estimate <= r.upper <= 1.0
        assert "raw_lower" in r.diagnostics
        assert r.diagnostics["raw_lower"] <= r.lower + 1e-12
    # P[mu >= 0 | x] should be monotone along x for this prior
    ests = [r.estimate for r in res]
    assert ests[0] < ests[1] < ests[2]
    assert abs(ests[1] - 0.5) < 0.1


def test_shared_delta_across_grid(samples):
    res = run(samples, target_xs=(-1.0, 0.5, 1.5))
    deltas = {r.delta for r in res}
    assert len(deltas) == 1


def test_analyze_validation(samples):
    with pytest.raises(ValueError):
        run(samples[:10])
    with pytest.raises(ValueError):
        run(samples, alpha=1.5)
    with pytest.raises(ValueError):
        run(samples, eta=-0.1)


def test_linear_marginal_density(samples):
    prior = bimodal_prior()
    res = mceb_linear(samples, CLASS, fn.marginal_density_at(0.0),
                      seed=7, bins=BINS, bootstrap_reps=100)
    truth = float(prior.marginal_density(np.array([0.0]))[0])
    assert res.target == "marginal_density"
    assert abs(res.estimate - truth) < 0.05
    assert res.lower <= truth <= res.upper
    assert np.isnan(res.pilot)
    assert res.eta == 0.0


def test_linear_constant_functional(samples):
    # L(G) = 1 for every member: exact answer, near-zero-width interval
    res = mceb_linear(samples, CLASS, fn.prior_tail_prob(-100.0),
                      seed=7, bins=BINS, bootstrap_reps=100)
    assert abs(res.estimate - 1.0) < 1e-6
    assert res.upper - res.lower < 1e-5


def test_csv_row_matches_columns(samples):
    res = run(samples)[0]
    row = res.csv_row()
    assert len(row) == len(MCEBResult.CSV_COLUMNS)
    assert row[0] == res.x and row[-1] == res.seed
