"""Surface functionals at the puncture and the boundary form.

For a field h and the puncture x0, the d+1 functionals are limits over
shrinking spheres of radius delta:

    gamma_0(h) = -lim  integral over |t-x0|=delta of dh/dnu dS     (nu outward)
    gamma_s(h) =  d * lim  integral of (t_s - x0_s)/|t-x0| h(t) dS

In d = 1 the sphere degenerates to two points and the functionals become the
jump expressions gamma_0(h) = -[h'] and gamma_1(h) = [h] across x0.

On the puncture basis chi_j of the kernel bundle these satisfy
gamma_i(chi_j) = delta_ij; on the raw kernel, gamma_0(G) = -1.  Smooth fields
have all functionals equal to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import ScalarField, DecomposedField
from .quadrature import sphere_rule, richardson_limit

DEFAULT_RADII = tuple(0.1 * 0.5**k for k in range(7))


class GammaLimitDiverged(ArithmeticError):
    """The shrinking-sphere sequence is not Cauchy."""


class SphereLeavesDomain(ValueError):
    """The probe sphere around the puncture exits the domain."""


@dataclass
class GammaVector:
    """The d+1 extrapolated functional values with per-entry error estimates."""

    values: np.ndarray
    err: np.ndarray

    def __len__(self):
        return len(self.values)


@dataclass
class BetaVector:
    """Value and gradient of a field's regular part at the puncture."""

    values: np.ndarray


def _radial_derivative(field: ScalarField, pts, dirs, delta):
    if field.has_gradient():
        grad = np.asarray(field.gradient(pts))
        return np.sum(grad * dirs, axis=-1)
    eps = max(1e-7, 1e-4 * delta)
    up = field.value(pts + eps * dirs)
    dn = field.value(pts - eps * dirs)
    return (np.asarray(up) - np.asarray(dn)) / (2.0 * eps)


def surface_gamma(field: ScalarField, j: int, x0, delta: float, d: int,
                  order: int = 24) -> complex:
    """One shrinking-sphere integrand evaluated at a fixed radius delta."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    bdry = (1.0 - np.linalg.norm(x0)) if d == 3 else min(x0[0], 1.0 - x0[0])
    if not 0.0 < delta < bdry:
        raise SphereLeavesDomain("puncture sphere leaves domain")
    if not 0 <= j <= d:
        raise ValueError(f"functional index must be in 0..{d}")
    if d == 1:
        pts = np.array([[x0[0] + delta], [x0[0] - delta]])
        if j == 1:
            va = field.value(pts)
            return complex(va[0] - va[1])
        dirs = np.array([[1.0], [-1.0]])
        dv = _radial_derivative(field, pts, dirs, delta)
        # two-point flux: -[h'] across the puncture
        return complex(-(dv[0] + dv[1]))
    dirs, w = sphere_rule(order, 2 * order)
    pts = x0[None, :] + delta * dirs
    if j == 0:
        dv = _radial_derivative(field, pts, dirs, delta)
        return complex(-np.sum(w * dv) * delta**2)
    h = np.asarray(field.value(pts))
    return complex(d * np.sum(w * dirs[:, j - 1] * h) * delta**2)


def gamma_limit(field: ScalarField, j: int, x0, d: int,
                radii=DEFAULT_RADII, order: int = 24):
    """Richardson-extrapolated delta -> 0 limit of surface_gamma.

    Returns (value, error_estimate).  Raises GammaLimitDiverged when the raw
    sequence of sphere values has growing increments, i.e. the field is not of
    the admissible singular-plus-smooth class.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    bdry = (1.0 - np.linalg.norm(x0)) if d == 3 else min(x0[0], 1.0 - x0[0])
    radii = [r for r in radii if r < bdry]
    if len(radii) < 3:
        base = 0.25 * bdry
        radii = [base * 0.5**k for k in range(7)]
    vals = [surface_gamma(field, j, x0, r, d, order) for r in radii]
    inc = np.abs(np.diff(vals))
    scale = max(1.0, max(abs(v) for v in vals))
    grew = sum(1 for a, b in zip(inc[:-1], inc[1:]) if b > 2.0 * a + 1e-13 * scale)
    if grew >= 2 and inc[-1] > 1e-9 * scale:
        raise GammaLimitDiverged("gamma limit does not stabilize")
    value, err = richardson_limit(vals)
    return value, err


def gamma_vector(field: ScalarField, x0, d: int, radii=DEFAULT_RADII,
                 order: int = 24) -> GammaVector:
    """All d+1 functionals of a field."""
    vals = np.empty(d + 1, dtype=complex)
    errs = np.empty(d + 1)
    for j in range(d + 1):
        vals[j], errs[j] = gamma_limit(field, j, x0, d, radii, order)
    return GammaVector(vals, errs)


def beta_vector(regular: ScalarField, x0, d: int, step: float = 1e-5) -> BetaVector:
    """beta_0 = value at x0, beta_i = i-th partial derivative at x0, taken on
    the regular part of a field.  Uses the field's analytic gradient when
    registered, central differences with the given step otherwise."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    vals = np.empty(d + 1, dtype=complex)
    pt = x0[None, :]
    vals[0] = complex(np.asarray(regular.value(pt))[0])
    if regular.has_gradient():
        g = np.asarray(regular.gradient(pt))[0]
        vals[1:] = g
    else:
        for i in range(d):
            e = np.zeros(d)
            e[i] = step
            up = np.asarray(regular.value(pt + e))[0]
            dn = np.asarray(regular.value(pt - e))[0]
            vals[1 + i] = (up - dn) / (2.0 * step)
    return BetaVector(vals)


def boundary_form(w: DecomposedField, v: DecomposedField) -> complex:
    """The sesquilinear defect <Bw, v> - <w, Bv> of the maximal operator,
    expressed through the traces:  sum_i gamma_i(w) conj(beta_i(v)) -
    sum_i beta_i(w) conj(gamma_i(v)).

    Both arguments must arrive decomposed; the singular coefficients are the
    gamma values and the beta values are read off the regular parts.
    """
    if not isinstance(w, DecomposedField) or not isinstance(v, DecomposedField):
        raise TypeError("decomposition required")
    d = w.bundle.d
    x0 = w.bundle.x0
    gw = np.asarray(w.singular, dtype=complex)
    gv = np.asarray(v.singular, dtype=complex)
    bw = beta_vector(w.regular_field, x0, d).values
    bv = beta_vector(v.regular_field, x0, d).values
    return complex(np.sum(gw * np.conj(bv)) - np.sum(bw * np.conj(gv)))
