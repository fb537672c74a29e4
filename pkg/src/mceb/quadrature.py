"""Panel Gauss-Legendre quadrature helpers used throughout the package."""

import numpy as np

_GL_CACHE = {}


def gl_nodes(order):
    """Gauss-Legendre nodes and weights on [-1, 1], cached by order."""
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def panel_nodes(a, b, panel_width=0.5, order=32):
    """Nodes and weights for composite Gauss-Legendre quadrature on [a, b].

    The interval is split into panels of at most `panel_width`; each panel
    carries an `order`-point rule.
    """
    if b <= a:
        return np.empty(0), np.empty(0)
    n_panels = max(1, int(np.ceil((b - a) / panel_width)))
    edges = np.linspace(a, b, n_panels + 1)
    x01, w01 = gl_nodes(order)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x01[None, :]).ravel()
    weights = (half[:, None] * w01[None, :]).ravel()
    return nodes, weights


def panel_quad(f, a, b, panel_width=0.5, order=32):
    """Integrate a vectorized scalar function over [a, b]."""
    nodes, weights = panel_nodes(a, b, panel_width, order)
    if nodes.size == 0:
        return 0.0
    return float(np.dot(weights, f(nodes)))


def cell_nodes(breakpoints, order=32):
    """Per-cell Gauss-Legendre nodes/weights for a strictly increasing grid.

    Returns arrays of shape (n_cells, order).
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    x01, w01 = gl_nodes(order)
    half = np.diff(breakpoints) / 2.0
    mid = (breakpoints[:-1] + breakpoints[1:]) / 2.0
    nodes = mid[:, None] + half[:, None] * x01[None, :]
    weights = half[:, None] * w01[None, :]
    return nodes, weights
