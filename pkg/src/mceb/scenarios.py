"""Named simulation ground truths and the benchmark prior class."""

from .priors import GaussianMixture, GaussianMixtureClass


def bimodal_prior():
    """Two well-separated spikes: 0.5 N(-1.5, 0.2^2) + 0.5 N(1.5, 0.2^2)."""
    return GaussianMixture(means=[-1.5, 1.5], sds=[0.2, 0.2],
                           weights=[0.5, 0.5])


def unimodal_prior():
    """0.7 N(-0.2, 0.2^2) + 0.3 N(0, 0.9^2)."""
    return GaussianMixture(means=[-0.2, 0.0], sds=[0.2, 0.9],
                           weights=[0.7, 0.3])


SCENARIOS = {"bimodal": bimodal_prior, "unimodal": unimodal_prior}


def scenario_prior(name):
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}") from None


def benchmark_class(support=3.0, tau=0.2, grid_points=120):
    """Gaussian-mixture class used throughout the benchmark studies."""
    return GaussianMixtureClass(tau=tau, support=support,
                                grid_points=grid_points)
