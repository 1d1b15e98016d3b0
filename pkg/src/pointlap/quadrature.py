"""Quadrature rules: Gauss-Legendre segments, a product rule on the sphere,
and a ball rule centered at an arbitrary interior point.

The sphere rule is Gauss-Legendre in cos(theta) crossed with a uniform
trapezoid in phi; it integrates spherical harmonics exactly up to high degree,
which covers every surface integrand produced by the kernel fields.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def _leggauss(n: int):
    return leggauss(n)


def gauss_segment(a: float, b: float, n: int):
    """Nodes and weights for Gauss-Legendre on [a, b]."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_gauss(breaks, n: int):
    """Gauss-Legendre panels between consecutive break points."""
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        x, w = gauss_segment(a, b, n)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


@lru_cache(maxsize=16)
def sphere_rule(n_theta: int = 24, n_phi: int = 48):
    """Unit-sphere rule: directions (n, 3) and weights summing to 4 pi."""
    t, wt = _leggauss(n_theta)          # t = cos(theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi
    st = np.sqrt(1.0 - t**2)
    dirs = np.empty((n_theta, n_phi, 3))
    dirs[..., 0] = st[:, None] * np.cos(phi)[None, :]
    dirs[..., 1] = st[:, None] * np.sin(phi)[None, :]
    dirs[..., 2] = t[:, None]
    w = (wt[:, None] * wphi) * np.ones((1, n_phi))
    return dirs.reshape(-1, 3), w.reshape(-1)


def ball_rule_centered(center, n_rho: int = 32, n_theta: int = 24, n_phi: int = 48):
    """Volume rule for the unit ball with the radial coordinate centered at a
    point inside it.  Returns points (n, 3) and weights including rho^2.

    Centering the radial direction at the evaluation point of a Green integral
    turns the 1/|x-xi| singularity into a bounded integrand.
    """
    center = np.asarray(center, dtype=float)
    dirs, wdir = sphere_rule(n_theta, n_phi)
    cu = dirs @ center
    rho_max = -cu + np.sqrt(np.maximum(cu**2 + 1.0 - center @ center, 0.0))
    x, w = _leggauss(n_rho)
    rho = 0.5 * rho_max[:, None] * (x[None, :] + 1.0)
    wrho = 0.5 * rho_max[:, None] * w[None, :]
    pts = center[None, None, :] + rho[..., None] * dirs[:, None, :]
    wts = wdir[:, None] * wrho * rho**2
    return pts.reshape(-1, 3), wts.reshape(-1)


def richardson_limit(values, ratio: float = 2.0):
    """Neville extrapolation of a sequence computed at radii delta_0 / ratio^k,
    assuming an error expansion in integer powers of delta.

    Returns (limit, error_estimate).
    """
    v = [np.asarray(x, dtype=complex) for x in values]
    m = len(v)
    table = [v]
    for order in range(1, m):
        prev = table[-1]
        fac = ratio**order
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0)
                      for i in range(len(prev) - 1)])
    best = table[-1][0]
    second = table[-2][-1] if m > 1 else best
    err = abs(best - second)
    return complex(best), float(err)
