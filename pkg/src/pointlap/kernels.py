"""Closed-form Dirichlet Green kernels for the unit interval and unit ball.

Sign convention used throughout the package: every kernel G satisfies
``Delta_x G(x, xi) = delta(x - xi)``, so G <= 0 in the interior, the flux of
grad_x G through a small sphere around the source is +1, and the 1-D kernel
has a unit slope jump across the diagonal.

The "puncture fields" chi_0..chi_d are the singular basis attached to an
interior point x0: chi_0 = -G(., x0) and chi_s = d/dxi_s [-G(x, xi)] at
xi = x0.  With the surface functionals of :mod:`pointlap.gamma` they form a
bi-orthonormal system, gamma_i(chi_j) = delta_ij, which is what every
decomposition and resolvent formula in the package is built on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPHERE_AREA = {1: 2.0, 3: 4.0 * np.pi}


class KernelSingularity(ValueError):
    """Evaluation requested at the kernel singularity x == xi."""


class ImagePointUndefined(ValueError):
    """The image point xi/|xi|^2 is undefined because xi == 0."""


def fundamental_constant(d: int) -> float:
    """C_d = -1/((d-2) sigma_d) so that Delta_x C_d |x-xi|^(2-d) = delta."""
    if d != 3:
        raise ValueError("fundamental solution implemented for d = 3 only")
    return -1.0 / ((d - 2) * SPHERE_AREA[d])


def _pair(x, xi):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    return np.broadcast_arrays(x, xi)


@dataclass(frozen=True)
class Point:
    """A point of the closed unit ball (d = 3) or interval [0, 1] (d = 1)."""

    coords: np.ndarray
    d: int = field(default=0)

    def __post_init__(self):
        coords = np.atleast_1d(np.asarray(self.coords, dtype=float))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "d", len(coords))
        if self.d not in (1, 3):
            raise ValueError(f"dimension must be 1 or 3, got {self.d}")
        if self.d == 3 and np.linalg.norm(coords) > 1.0 + 1e-14:
            raise ValueError("point lies outside the closed unit ball")
        if self.d == 1 and not (-1e-14 <= coords[0] <= 1.0 + 1e-14):
            raise ValueError("point lies outside the closed unit interval")

    @property
    def interior(self) -> bool:
        if self.d == 3:
            return bool(np.linalg.norm(self.coords) < 1.0)
        return bool(0.0 < self.coords[0] < 1.0)


# ---------------------------------------------------------------------------
# unit ball, d = 3
# ---------------------------------------------------------------------------

def xyz_quantities(x, xi):
    """The three squared quantities X^2 = |x-xi|^2, Y^2 = |xi|^2 |x - xi/|xi|^2|^2,
    Z^2 = (1-|x|^2)(1-|xi|^2); they satisfy X^2 = Y^2 - Z^2 identically.

    Y is evaluated from its displayed definition, which requires xi != 0.
    """
    x, xi = _pair(x, xi)
    nxi2 = np.sum(xi * xi, axis=-1)
    if np.any(nxi2 == 0.0):
        raise ImagePointUndefined("image point undefined: xi = 0 (use the limit form)")
    X2 = np.sum((x - xi) ** 2, axis=-1)
    image = xi / nxi2[..., None]
    Y2 = nxi2 * np.sum((x - image) ** 2, axis=-1)
    Z2 = (1.0 - np.sum(x * x, axis=-1)) * (1.0 - nxi2)
    if X2.size == 1:
        return float(X2), float(Y2), float(Z2)
    return X2, Y2, Z2


def fundamental_solution(x, xi):
    """Free-space kernel C_3 |x - xi|^(-1) = -1/(4 pi |x - xi|)."""
    x, xi = _pair(x, xi)
    r = np.linalg.norm(x - xi, axis=-1)
    if np.any(r == 0.0):
        raise KernelSingularity("kernel singularity: x == xi")
    val = fundamental_constant(3) / r
    return float(val) if val.size == 1 else val


def _ball_XY(x, xi):
    X = np.linalg.norm(x - xi, axis=-1)
    # |xi|^2 |x - xi/|xi|^2|^2 expands to |x|^2 |xi|^2 - 2 x.xi + 1, which is
    # smooth in xi through xi = 0 (the removable limit Y -> 1).
    Y2 = (np.sum(x * x, axis=-1) * np.sum(xi * xi, axis=-1)
          - 2.0 * np.sum(x * xi, axis=-1) + 1.0)
    return X, np.sqrt(Y2)


def green_ball(x, xi):
    """Dirichlet Green kernel of the unit ball, Delta_x G = delta(x - xi)."""
    x, xi = _pair(x, xi)
    X, Y = _ball_XY(x, xi)
    if np.any(X == 0.0):
        raise KernelSingularity("kernel singularity: x == xi")
    val = fundamental_constant(3) * (1.0 / X - 1.0 / Y)
    return float(val) if val.size == 1 else val


def green_ball_grad_x(x, xi):
    """grad_x G(x, xi) for the ball kernel, shape (..., 3)."""
    x, xi = _pair(x, xi)
    X, Y = _ball_XY(x, xi)
    if np.any(X == 0.0):
        raise KernelSingularity("kernel singularity: x == xi")
    nxi2 = np.sum(xi * xi, axis=-1)[..., None]
    C = fundamental_constant(3)
    g = C * (-(x - xi) / X[..., None] ** 3 + (nxi2 * x - xi) / Y[..., None] ** 3)
    return g[0] if g.shape[0] == 1 and np.asarray(x).ndim == 1 else g


def green_ball_grad_xi(x, xi):
    """d/dxi G(x, xi), shape (..., 3)."""
    x, xi = _pair(x, xi)
    X, Y = _ball_XY(x, xi)
    if np.any(X == 0.0):
        raise KernelSingularity("kernel singularity: x == xi")
    nx2 = np.sum(x * x, axis=-1)[..., None]
    C = fundamental_constant(3)
    g = C * ((x - xi) / X[..., None] ** 3 + (nx2 * xi - x) / Y[..., None] ** 3)
    return g[0] if g.shape[0] == 1 and np.asarray(x).ndim == 1 else g


def green_ball_hess_x_grad_xi(x, xi):
    """Mixed second derivatives d^2 G / dx_i dxi_s, shape (..., 3, 3).

    Entry [i, s] = d/dx_i of dG/dxi_s; used for the normal derivative of the
    source-gradient fields in the gamma functionals.
    """
    x, xi = _pair(x, xi)
    X, Y = _ball_XY(x, xi)
    if np.any(X == 0.0):
        raise KernelSingularity("kernel singularity: x == xi")
    C = fundamental_constant(3)
    dx = x - xi
    nx2 = np.sum(x * x, axis=-1)
    nxi2 = np.sum(xi * xi, axis=-1)
    eye = np.eye(3)
    X3 = X[..., None, None] ** 3
    X5 = X[..., None, None] ** 5
    Y3 = Y[..., None, None] ** 3
    Y5 = Y[..., None, None] ** 5
    # d/dx_i [(x_s - xi_s)/X^3]
    term1 = eye / X3 - 3.0 * dx[..., :, None] * dx[..., None, :] / X5
    # d/dx_i [(|x|^2 xi_s - x_s)/Y^3]; dY/dx_i = (|xi|^2 x_i - xi_i)/Y
    u = nx2[..., None] * xi - x                    # numerator, index s
    w = nxi2[..., None] * x - xi                   # Y * dY/dx, index i
    term2 = ((2.0 * x[..., :, None] * xi[..., None, :] - eye) / Y3
             - 3.0 * w[..., :, None] * u[..., None, :] / Y5)
    h = C * (term1 + term2)
    return h[0] if h.shape[0] == 1 and np.asarray(x).ndim == 1 else h


# ---------------------------------------------------------------------------
# unit interval, d = 1
# ---------------------------------------------------------------------------

def green_interval(x, t):
    """1-D Dirichlet kernel with G'' = delta: -x(1-t) for x <= t, -t(1-x) above."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    lo = np.minimum(x, t)
    hi = np.maximum(x, t)
    val = -lo * (1.0 - hi)
    return float(val) if val.ndim == 0 else val


def green_interval_dx(x, t):
    """d/dx of the interval kernel (away from x == t)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    val = np.where(x <= t, -(1.0 - t), t)
    return float(val) if val.ndim == 0 else val


def green_interval_dt(x, t):
    """d/dt of the interval kernel (away from x == t)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    val = np.where(x <= t, x, x - 1.0)
    return float(val) if val.ndim == 0 else val


def _s_of_lambda(lam):
    # lambda = -s^2; the kernel below is even in s, either branch works.
    return np.sqrt(-complex(lam))


def green_interval_lambda(x, t, lam):
    """Kernel of (d^2/dx^2 - lam) with Dirichlet ends: reduces to green_interval
    at lam = 0.  Valid for complex lam away from the Dirichlet spectrum."""
    if abs(lam) < 1e-300:
        return green_interval(x, t) + 0.0j
    s = _s_of_lambda(lam)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    lo = np.minimum(x, t)
    hi = np.maximum(x, t)
    val = -np.sin(s * lo) * np.sin(s * (1.0 - hi)) / (s * np.sin(s))
    return complex(val) if val.ndim == 0 else val


def green_interval_lambda_dt(x, t, lam):
    """d/dt of the lam-dependent interval kernel (away from x == t)."""
    if abs(lam) < 1e-300:
        return green_interval_dt(x, t) + 0.0j
    s = _s_of_lambda(lam)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    left = np.sin(s * x) * np.cos(s * (1.0 - t)) / np.sin(s)      # x <= t
    right = -np.cos(s * t) * np.sin(s * (1.0 - x)) / np.sin(s)    # x > t
    val = np.where(x <= t, left, right)
    return complex(val) if val.ndim == 0 else val


def interval_green_diagonal(x0: float, lam) -> complex:
    """G_lam(x0, x0): the resolvent kernel on the diagonal.  Closed form for the
    eigenfunction sum sum_n omega_n(x0)^2 / (mu_n - lam)."""
    if abs(lam) < 1e-300:
        return complex(-x0 * (1.0 - x0))
    s = _s_of_lambda(lam)
    return complex(-np.sin(s * x0) * np.sin(s * (1.0 - x0)) / (s * np.sin(s)))


def interval_green_diagonal_dlam(x0: float, lam) -> complex:
    """d/dlam of interval_green_diagonal, i.e. sum_n omega_n(x0)^2/(mu_n-lam)^2."""
    if abs(lam) < 1e-9:
        # central difference across the removable point; the function is
        # analytic at lam = 0
        h = 1e-5
        return (interval_green_diagonal(x0, lam + h)
                - interval_green_diagonal(x0, lam - h)) / (2.0 * h)
    s = _s_of_lambda(lam)
    a, b = x0, 1.0 - x0
    N = -np.sin(s * a) * np.sin(s * b)
    dN = -(a * np.cos(s * a) * np.sin(s * b) + b * np.sin(s * a) * np.cos(s * b))
    D = s * np.sin(s)
    dD = np.sin(s) + s * np.cos(s)
    dG_ds = (dN * D - N * dD) / D**2
    ds_dlam = -1.0 / (2.0 * s)
    return complex(dG_ds * ds_dlam)


# ---------------------------------------------------------------------------
# kernel bundle
# ---------------------------------------------------------------------------

class KernelBundle:
    """The domain's kernel package for one puncture x0: Green function, its
    source-side derivative fields, and the bi-orthonormal puncture basis."""

    def __init__(self, d: int, x0):
        if d not in (1, 3):
            raise ValueError("dimension must be 1 or 3")
        self.d = d
        self.x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        if len(self.x0) != d:
            raise ValueError("puncture coordinates do not match the dimension")
        if not Point(self.x0).interior:
            raise ValueError("puncture must be strictly interior")

    # -- raw kernel -------------------------------------------------------
    def green(self, x, xi=None):
        xi = self.x0 if xi is None else np.asarray(xi, dtype=float)
        if self.d == 3:
            return green_ball(x, xi)
        x = np.squeeze(np.asarray(x, dtype=float))
        return green_interval(x, np.squeeze(xi))

    def boundary_distance(self) -> float:
        if self.d == 3:
            return 1.0 - float(np.linalg.norm(self.x0))
        return float(min(self.x0[0], 1.0 - self.x0[0]))

    # -- puncture fields ---------------------------------------------------
    def green_source_gradient(self, x, s: int):
        """Component s of the source-point derivative kernel, normalized so the
        sphere functionals read off unit coefficients: gamma_j(.) = delta_js.
        Equals d/dxi_s of the sign-reversed kernel -G(x, xi) at xi = x0; its
        leading singular term is C_d (2-d) |x-x0|^(-d) (x_s - x0_s)."""
        if not 1 <= s <= self.d:
            raise ValueError(f"component s must be in 1..{self.d}")
        if self.d == 3:
            g = green_ball_grad_xi(x, np.broadcast_to(self.x0, np.atleast_2d(np.asarray(x, float)).shape))
            g = np.atleast_2d(g)
            val = -g[..., s - 1]
            return float(val) if val.size == 1 else val
        x = np.asarray(x, dtype=float)
        val = -green_interval_dt(x, self.x0[0])
        return float(val) if np.ndim(val) == 0 else val

    def puncture_field(self, j: int):
        """The j-th singular basis field chi_j as a ScalarField (0 <= j <= d).

        chi_0 = -green(., x0); chi_s = green_source_gradient(., s).  The
        family is dual to the gamma functionals: gamma_i(chi_j) = delta_ij.
        """
        from .fields import CallableField

        x0 = self.x0
        if j == 0:
            if self.d == 3:
                return CallableField(
                    lambda X: -np.atleast_1d(green_ball(X, np.broadcast_to(x0, np.shape(X)))),
                    gradient=lambda X: -green_ball_grad_x(X, np.broadcast_to(x0, np.shape(X))),
                    name="chi0",
                )
            return CallableField(
                lambda X: -green_interval(X[:, 0], x0[0]),
                gradient=lambda X: -green_interval_dx(X[:, 0], x0[0])[:, None],
                name="chi0",
            )
        if not 1 <= j <= self.d:
            raise ValueError(f"field index must be in 0..{self.d}")
        if self.d == 3:
            s = j

            def val(X, s=s):
                g = green_ball_grad_xi(X, np.broadcast_to(x0, np.shape(X)))
                return -np.atleast_2d(g)[:, s - 1]

            def grad(X, s=s):
                H = green_ball_hess_x_grad_xi(X, np.broadcast_to(x0, np.shape(X)))
                H = H if H.ndim == 3 else H[None]
                return -H[:, :, s - 1]

            return CallableField(val, gradient=grad, name=f"chi{j}")
        return CallableField(
            lambda X: -green_interval_dt(X[:, 0], x0[0]),
            # -d/dx d/dt G = -1 on both sides of the puncture
            gradient=lambda X: np.full((X.shape[0], 1), -1.0),
            name=f"chi{j}",
        )

    def resolvent_field(self, j: int, lam):
        """chi_j + lam (B_0 - lam)^(-1) chi_j in closed form (d = 1 only):
        the lam-eigenfield with gamma_i = delta_ij used by the resolvents."""
        if self.d != 1:
            raise NotImplementedError("closed-form resolvent fields exist for d = 1")
        from .fields import CallableField

        x0 = self.x0[0]
        if j == 0:
            return CallableField(
                lambda X: -green_interval_lambda(X[:, 0], x0, lam),
                name=f"v0(lam={lam})",
            )
        if j != 1:
            raise ValueError("d = 1 has fields j in {0, 1}")
        return CallableField(
            lambda X: -green_interval_lambda_dt(X[:, 0], x0, lam),
            name=f"v1(lam={lam})",
        )
