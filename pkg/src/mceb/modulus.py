"""Discretized modulus of continuity and the quasi-minimax affine estimator.

The modulus problem searches for the hardest pair of priors in the
localized class: maximize L(G1) - L(G-1) over two membership-constrained
parameter vectors subject to the chi-square-type proximity constraint

    sum_k (nu_{G1}(k) - nu_{G-1}(k))^2 / nu_bar(k) <= delta^2

and the localization |nu_{Gi}(k) - nu_bar(k)| <= |I_k| c_m (interior
cells; <= c_m for the tails).  The dual variable of the proximity
constraint is a superdifferential element omega'(delta), which prices the
bias/variance tradeoff and determines the optimal piecewise-constant
estimator weights in closed form.
"""

from dataclasses import dataclass

import numpy as np

from . import conic

DELTA_LABEL = "modulus:delta"


class EmptyLocalizedClass(Exception):
    """No prior in the class is sup-norm compatible with the pilot.

    This is a meaningful outcome (model misspecification signal), not a
    numerical failure.
    """


class SolverFailure(RuntimeError):
    """The conic solver failed on a well-posed program."""


def _check(solution, context):
    if solution.status == "Infeasible":
        raise EmptyLocalizedClass(context)
    if solution.status != "Optimal":
        raise SolverFailure(f"{solution.status} while solving {context}")
    return solution


@dataclass(frozen=True)
class ModulusSolution:
    """Solved modulus instance at one delta."""

    delta: float
    omega: float
    omega_prime: float
    g1: object
    gm1: object
    binding: bool
    params1: np.ndarray
    params2: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    attained_delta: float
    values: tuple  # (L(G1), L(G-1)) at the optimizers


@dataclass(frozen=True)
class AffineEstimator:
    """L_hat = Q0 + mean of Q(X_i), Q piecewise constant over bins."""

    q0: float
    q: np.ndarray
    max_bias: float
    gamma: float
    delta: float
    omega: float
    omega_prime: float
    bins: object
    m: int
    functional: object = None
    pilot_fingerprint: tuple = ()

    def weights_at(self, x):
        """Q(x) by bin lookup (tails included)."""
        return self.q[self.bins.assign(x)]

    def evaluate(self, samples):
        """Point estimate Q0 + mean Q(X_i) over an estimation fold."""
        return self.q0 + float(np.mean(self.weights_at(samples)))


def _localization_blocks(program, mass_matrix, pilot, sl, label_prefix):
    # |nu_G(k) - nu_bar(k)| <= radius_k * c_m as two one-sided blocks
    n = program.n
    k_cells, dim = mass_matrix.shape
    idx = np.arange(n)[sl]
    rows = np.zeros((k_cells, n))
    rows[:, idx] = mass_matrix
    slack = pilot.bins.cell_radii * pilot.c_m
    program.add_inequality_block(rows, pilot.nu_bar + slack,
                                 f"{label_prefix}:loc_upper")
    program.add_inequality_block(-rows, slack - pilot.nu_bar,
                                 f"{label_prefix}:loc_lower")


def build_modulus_program(class_spec, pilot, functional, delta,
                          with_soc=True, localized=True):
    """Assemble the two-copy conic program for the modulus at delta.

    With localized=False the sup-norm localization constraints are
    dropped and the search runs over the full prior class.
    """
    if np.any(pilot.nu_bar <= 0):
        raise ValueError("pilot bin masses must be positive")
    dim = class_spec.dim
    program = conic.ConicProgram(2 * dim)
    sl1, sl2 = slice(0, dim), slice(dim, 2 * dim)
    coefs = class_spec.functional_coefficients(functional)
    objective = np.concatenate([coefs, -coefs])
    program.set_objective(objective)
    class_spec.emit_membership(program, sl1, "G1")
    class_spec.emit_membership(program, sl2, "Gm1")
    mass = class_spec.bin_mass_matrix(pilot.bins)
    if localized:
        _localization_blocks(program, mass, pilot, sl1, "G1")
        _localization_blocks(program, mass, pilot, sl2, "Gm1")
    if with_soc:
        if delta <= 0:
            raise ValueError("delta must be positive")
        scaled = mass / np.sqrt(pilot.nu_bar)[:, None]
        A = np.hstack([scaled, -scaled])
        program.add_soc(A, np.zeros(mass.shape[0]), np.zeros(2 * dim),
                        float(delta), DELTA_LABEL)
    return program


def solve_modulus(class_spec, pilot, functional, delta, localized=True):
    """Solve the modulus problem; omega'(delta) is the SOC dual."""
    program = build_modulus_program(class_spec, pilot, functional, delta,
                                    localized=localized)
    sol = _check(conic.solve(program),
                 f"modulus at delta={delta:.6g}")
    dim = class_spec.dim
    p1, p2 = sol.primal[:dim], sol.primal[dim:]
    coefs = class_spec.functional_coefficients(functional)
    l1, l2 = float(coefs @ p1), float(coefs @ p2)
    mass = class_spec.bin_mass_matrix(pilot.bins)
    nu1, nu2 = mass @ p1, mass @ p2
    attained = float(np.sqrt(np.sum((nu1 - nu2) ** 2 / pilot.nu_bar)))
    dual = sol.dual(DELTA_LABEL)
    omega_prime = max(float(dual), 0.0) if dual is not None else 0.0
    binding = attained >= delta * (1.0 - 1e-6)
    if not binding:
        omega_prime = 0.0
    return ModulusSolution(
        delta=float(delta), omega=l1 - l2, omega_prime=omega_prime,
        g1=class_spec.prior_from_solution(p1),
        gm1=class_spec.prior_from_solution(p2),
        binding=binding, params1=p1, params2=p2, nu1=nu1, nu2=nu2,
        attained_delta=attained, values=(l1, l2))


def build_estimator(solution, pilot, functional, m):
    """Optimal affine estimator from a solved modulus instance.

    The weights use the attained proximity distance and objective of the
    returned primal, so the worst-case-bias and variance identities of
    the modulus theory hold to floating-point accuracy by construction:

        q_k = (omega'/delta) (nu_{G1}(k) - nu_{G-1}(k)) / nu_bar(k)
        Q0  = (L(G1)+L(G-1))/2
              - (omega'/delta) sum_k (nu1-nu2)(nu1+nu2) / (2 nu_bar)
        B_hat = (omega - delta omega')/2,  Gamma = omega'^2 / m.

    When the proximity constraint is slack (delta beyond delta_max) the
    estimator degenerates to the constant midpoint of the two values.
    """
    if m < 1:
        raise ValueError("m must be positive")
    l1, l2 = solution.values
    nu_bar = pilot.nu_bar
    d = solution.nu1 - solution.nu2
    if solution.binding and solution.omega_prime > 0:
        delta_hat = solution.attained_delta
        ratio = solution.omega_prime / delta_hat
        q = ratio * d / nu_bar
        q0 = (l1 + l2) / 2.0 \
            - ratio * float(np.sum(d * (solution.nu1 + solution.nu2)
                                   / (2.0 * nu_bar)))
        omega_prime = solution.omega_prime
    else:
        delta_hat = solution.delta
        q = np.zeros_like(nu_bar)
        q0 = (l1 + l2) / 2.0
        omega_prime = 0.0
    gamma = float(np.sum(q ** 2 * nu_bar)) / m
    max_bias = max((solution.omega - delta_hat * omega_prime) / 2.0, 0.0)
    return AffineEstimator(
        q0=q0, q=q, max_bias=max_bias, gamma=gamma, delta=delta_hat,
        omega=solution.omega, omega_prime=omega_prime, bins=pilot.bins,
        m=int(m), functional=functional,
        pilot_fingerprint=pilot.fingerprint)


def bias_at(estimator, class_spec, functional, params):
    """Bias Q0 + sum_k q_k nu_G(k) - L(G) at a class parameter vector."""
    mass = class_spec.bin_mass_matrix(estimator.bins)
    coefs = class_spec.functional_coefficients(functional)
    return estimator.q0 + float(estimator.q @ (mass @ params)) \
        - float(coefs @ params)


def worst_case_bias_lp(estimator, class_spec, pilot, functional,
                       localized=True):
    """Extreme biases of the estimator over the (localized) class.

    Returns (max_bias, min_bias, argmax_prior, argmin_prior); solved as
    two linear programs over a single membership-constrained copy.
    """
    dim = class_spec.dim
    mass = class_spec.bin_mass_matrix(pilot.bins)
    coefs = class_spec.functional_coefficients(functional)
    obj = estimator.q @ mass - coefs
    results = []
    for sign in (1.0, -1.0):
        program = conic.ConicProgram(dim)
        program.set_objective(sign * obj)
        class_spec.emit_membership(program, slice(0, dim), "G")
        if localized:
            _localization_blocks(program, mass, pilot, slice(0, dim), "G")
        sol = _check(conic.solve(program), "worst-case bias LP")
        results.append((sign * sol.objective + estimator.q0, sol.primal))
    (max_b, p_max), (min_b, p_min) = results
    return (max_b, min_b, class_spec.prior_from_solution(p_max),
            class_spec.prior_from_solution(p_min))


def delta_max(class_spec, pilot, functional, localized=True):
    """Proximity distance attained when the modulus is solved unconstrained.

    Beyond this delta the proximity constraint is slack, so the modulus
    is flat; it is the natural upper end of any delta search.
    """
    program = build_modulus_program(class_spec, pilot, functional,
                                    delta=1.0, with_soc=False,
                                    localized=localized)
    sol = _check(conic.solve(program), "unconstrained modulus")
    dim = class_spec.dim
    mass = class_spec.bin_mass_matrix(pilot.bins)
    d = mass @ sol.primal[:dim] - mass @ sol.primal[dim:]
    return float(np.sqrt(np.sum(d ** 2 / pilot.nu_bar)))


def hardest_prior_table(solution, x_grid):
    """Diagnostic array: columns x, g1, gm1, f_g1, f_gm1 on a grid."""
    x = np.asarray(x_grid, dtype=float)
    return np.column_stack([
        x,
        solution.g1.density(x), solution.gm1.density(x),
        solution.g1.marginal_density(x), solution.gm1.marginal_density(x)])
