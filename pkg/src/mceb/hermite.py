"""Hermite functions and their Gaussian convolutions.

The orthonormal Hermite functions h_j(x) = c_j H_j(x) exp(-x^2/2) with
c_j = (2^j j! sqrt(pi))^(-1/2) are evaluated through their three-term
recurrence, which is stable for large j (explicit polynomial coefficients
overflow long before j = 30).
"""

import numpy as np
from scipy.special import gammaln


def hermite_functions(order, x):
    """Evaluate h_0..h_order at x.

    Parameters
    ----------
    order : int
        Largest index to evaluate.
    x : array_like
        Evaluation points.

    Returns
    -------
    ndarray of shape (order + 1,) + x.shape
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((order + 1,) + x.shape)
    h_prev = np.pi ** (-0.25) * np.exp(-x ** 2 / 2.0)
    out[0] = h_prev
    if order == 0:
        return out
    # x h_j = sqrt(j/2) h_{j-1} + sqrt((j+1)/2) h_{j+1}
    h_cur = np.sqrt(2.0) * x * h_prev
    out[1] = h_cur
    for j in range(1, order):
        h_next = (x * h_cur - np.sqrt(j / 2.0) * h_prev) / np.sqrt((j + 1) / 2.0)
        out[j + 1] = h_next
        h_prev, h_cur = h_cur, h_next
    return out


def hermite_function(j, x):
    """Single Hermite function h_j evaluated at x."""
    return hermite_functions(j, np.asarray(x, dtype=float))[j]


def gauss_conv_hermite(j, x):
    """Convolution of the standard normal density with h_j.

    Closed form: (phi * h_j)(x) = exp(-x^2/4) x^j / sqrt(2 sqrt(pi) 2^j j!).
    Evaluated in log space to stay finite for large j.
    """
    x = np.asarray(x, dtype=float)
    log_norm = -0.5 * (np.log(2.0) + 0.5 * np.log(np.pi)
                       + j * np.log(2.0) + gammaln(j + 1))
    if j == 0:
        return np.exp(log_norm) * np.exp(-x ** 2 / 4.0)
    sign = np.where(x < 0, (-1.0) ** j, 1.0)
    with np.errstate(divide="ignore"):
        mag = np.where(x == 0.0, -np.inf, j * np.log(np.abs(x)))
    return sign * np.exp(log_norm + mag - x ** 2 / 4.0)


def gauss_conv_hermite_all(order, x):
    """(phi * h_j)(x) for j = 0..order; shape (order + 1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    return np.stack([gauss_conv_hermite(j, x) for j in range(order + 1)])


def normalization_coefficients(order):
    """Coefficients n_j with sum_j n_j alpha_j = integral of g.

    For g = sum alpha_j h_j the total mass is g^*(0) =
    sum_j alpha_j i^j sqrt(2 pi) h_j(0); odd j contribute 0 and even j
    contribute a real value, so the vector returned is real.
    """
    h0 = hermite_functions(order, np.array(0.0))
    j = np.arange(order + 1)
    real_i_pow = np.where(j % 4 == 0, 1.0, np.where(j % 4 == 2, -1.0, 0.0))
    return np.sqrt(2.0 * np.pi) * real_i_pow * h0


def sobolev_ellipsoid_rows(order):
    """Rows of the order-1 Sobolev ellipsoid in Hermite coordinates.

    Returns a matrix A such that the constraint
    int |g^*(t)|^2 (t^2 + 1) dt <= 2 pi C_sob is ||A alpha||^2 <= 2 C_sob,
    i.e. 2 a_0^2 + a_1^2 + sum_{j>=1} [2 a_j^2 + (sqrt(j) a_{j-1}
    - sqrt(j+1) a_{j+1})^2] with a_j = 0 for j > order.
    """
    p = order
    rows = []

    def unit(j, scale):
        r = np.zeros(p + 1)
        if j <= p:
            r[j] = scale
        return r

    rows.append(unit(0, np.sqrt(2.0)))
    rows.append(unit(1, 1.0))
    for j in range(1, p + 2):
        rows.append(unit(j, np.sqrt(2.0)))
        rows.append(unit(j - 1, np.sqrt(j)) - unit(j + 1, np.sqrt(j + 1.0)))
    return np.array([r for r in rows if np.any(r != 0.0)])
