"""Composite Gauss-Legendre panel quadrature on fixed knot sequences.

Profile construction in this package reduces every singular integral to
a smooth one by an explicit change of variables and then accumulates it
panel by panel; the knot values double as the profile sample points.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gauss_panels", "cumulative_panels"]

_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order: int):
    cached = _RULES.get(order)
    if cached is None:
        cached = np.polynomial.legendre.leggauss(order)
        _RULES[order] = cached
    return cached


def gauss_panels(f, knots, order=12):
    """Integrals of ``f`` over each interval of ``knots`` (vectorized).

    ``f`` must accept an ndarray and return values of the same shape.
    Returns an array of length ``len(knots) - 1``.
    """
    knots = np.asarray(knots, dtype=float)
    nodes, weights = _rule(order)
    a = knots[:-1]
    half = 0.5 * np.diff(knots)
    pts = a[:, None] + half[:, None] * (nodes[None, :] + 1.0)
    vals = f(pts)
    return half * np.sum(weights[None, :] * vals, axis=1)


def cumulative_panels(f, knots, order=12):
    """Cumulative integral of ``f`` from ``knots[0]`` evaluated at every knot."""
    out = np.empty(len(knots))
    out[0] = 0.0
    np.cumsum(gauss_panels(f, knots, order=order), out=out[1:])
    return out
