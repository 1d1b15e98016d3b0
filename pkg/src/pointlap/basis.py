"""Dirichlet eigenpairs of the Laplacian on the interval and the unit ball.

Eigenvalue convention: Delta omega_n = mu_n omega_n with mu_n < 0, so the
interval modes are mu_n = -(n pi)^2, omega_n = sqrt(2) sin(n pi x), and the
ball modes are mu = -z_{l,n}^2 with z_{l,n} the n-th positive zero of the
spherical Bessel function j_l, paired with real spherical harmonics.

Ball eigenfunctions are evaluated through homogeneous solid-harmonic
polynomials, which keeps both the values and the Cartesian gradients analytic
and regular at the origin:

    omega(x) = A z^l jhat_l(z r) S_lm(x),      jhat_l(u) = j_l(u) / u^l,

with S_lm the real solid harmonic of degree l and A fixed by unit L2 norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import spherical_jn

MAX_BESSEL_ORDER = 25
MAX_BESSEL_ZEROS = 200


class ZeroTableExhausted(LookupError):
    """Requested spherical Bessel zero outside the supported table range."""


# ---------------------------------------------------------------------------
# spherical Bessel zeros
# ---------------------------------------------------------------------------

_zero_cache: dict[int, np.ndarray] = {}


def _zeros_up_to(l: int, count: int) -> np.ndarray:
    have = _zero_cache.get(l)
    if have is not None and len(have) >= count:
        return have
    if l == 0:
        z = np.pi * np.arange(1, count + 1)
        _zero_cache[0] = z
        return z
    # interlacing: z_{l-1,k} < z_{l,k} < z_{l-1,k+1}
    lower = _zeros_up_to(l - 1, count + 1)
    f = lambda u: spherical_jn(l, u)
    z = np.array([brentq(f, lower[k], lower[k + 1], xtol=1e-14, rtol=8.9e-16)
                  for k in range(count)])
    _zero_cache[l] = z
    return z


def bessel_zero(l: int, n: int) -> float:
    """The n-th positive zero of the spherical Bessel function j_l."""
    if not (0 <= l <= MAX_BESSEL_ORDER and 1 <= n <= MAX_BESSEL_ZEROS):
        raise ZeroTableExhausted(
            f"zero table exhausted: need l <= {MAX_BESSEL_ORDER}, n <= {MAX_BESSEL_ZEROS}")
    return float(_zeros_up_to(l, n)[n - 1])


def _jhat(l: int, u: np.ndarray) -> np.ndarray:
    """j_l(u) / u^l, regular through u = 0."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-2
    if np.any(~small):
        us = u[~small]
        out[~small] = spherical_jn(l, us) / us**l
    if np.any(small):
        t = u[small] ** 2 / 4.0
        dfact = float(math.prod(range(2 * l + 1, 0, -2)))
        a = l + 1.5
        out[small] = (1.0 - t / a + t**2 / (2.0 * a * (a + 1.0))
                      - t**3 / (6.0 * a * (a + 1.0) * (a + 2.0))) / dfact
    return out


# ---------------------------------------------------------------------------
# real solid harmonics
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _theta_poly(l: int, m: int):
    """Coefficients of T_lm(z, r2) = r^(l-m) (d/dc)^m P_l (z/r) as a polynomial
    sum_k coeff[k] z^(l-m-2k) r2^k."""
    coeffs = []
    for k in range(l // 2 + 1):
        p = l - 2 * k
        if p < m:
            coeffs.append(0.0)
            continue
        c = (-1) ** k * math.comb(l, k) * math.comb(2 * l - 2 * k, l)
        fall = math.factorial(p) // math.factorial(p - m)
        coeffs.append(c * fall / 2.0**l)
    return tuple(coeffs)


class RealSphericalHarmonic:
    """Real orthonormal spherical harmonic of degree l and order m, evaluated
    through its solid form S(x) = r^l Y_lm(x/r) with analytic gradient."""

    def __init__(self, l: int, m: int):
        self.l = l
        self.m = m
        am = abs(m)
        norm = math.sqrt((2 * l + 1) / (4.0 * np.pi)
                         * math.factorial(l - am) / math.factorial(l + am))
        if m != 0:
            norm *= math.sqrt(2.0)
        # Condon-Shortley-free real convention: sqrt(2) (-1)^m Re/Im of the
        # complex harmonic, i.e. sqrt(2) N_lm |P_l^m| angular parts >= 0 near
        # the pole
        self.norm = norm
        self.coeffs = _theta_poly(l, am)

    def _parts(self, X):
        x, y, z = X[:, 0], X[:, 1], X[:, 2]
        r2 = x * x + y * y + z * z
        am = abs(self.m)
        w = (x + 1j * y) ** am if am else np.ones_like(x, dtype=complex)
        A = w.real if self.m >= 0 else w.imag
        # T and its partials wrt z and r2
        T = np.zeros_like(z)
        Tz = np.zeros_like(z)
        Tr2 = np.zeros_like(z)
        l, m = self.l, am
        for k, c in enumerate(self.coeffs):
            if c == 0.0:
                continue
            p = l - m - 2 * k
            zp = z**p
            r2k = r2**k
            T += c * zp * r2k
            if p > 0:
                Tz += c * p * z ** (p - 1) * r2k
            if k > 0:
                Tr2 += c * k * zp * r2 ** (k - 1)
        return x, y, z, r2, w, A, T, Tz, Tr2

    def solid_value(self, X) -> np.ndarray:
        """S(x) = r^l Y_lm(x/r): a homogeneous polynomial of degree l."""
        *_, A, T, _, _ = self._parts(X)
        return self.norm * A * T

    def solid_gradient(self, X) -> np.ndarray:
        x, y, z, r2, w, A, T, Tz, Tr2 = self._parts(X)
        am = abs(self.m)
        n = X.shape[0]
        if am:
            wm1 = (x + 1j * y) ** (am - 1)
            if self.m >= 0:
                Ax, Ay = am * wm1.real, -am * wm1.imag
            else:
                Ax, Ay = am * wm1.imag, am * wm1.real
        else:
            Ax = Ay = np.zeros(n)
        g = np.empty((n, 3))
        g[:, 0] = Ax * T + A * Tr2 * 2.0 * x
        g[:, 1] = Ay * T + A * Tr2 * 2.0 * y
        g[:, 2] = A * (Tz + Tr2 * 2.0 * z)
        return self.norm * g

    def value_on_sphere(self, dirs) -> np.ndarray:
        return self.solid_value(np.asarray(dirs, dtype=float))


# ---------------------------------------------------------------------------
# modes
# ---------------------------------------------------------------------------

@dataclass
class Mode:
    """One Dirichlet eigenpair."""

    index: int
    mu: float
    d: int
    labels: tuple
    norm_residual: float = 0.0
    _harmonic: RealSphericalHarmonic = dc_field(default=None, repr=False)
    _z: float = 0.0
    _amp: float = 0.0

    def value(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.d == 1:
            n = self.labels[0]
            return math.sqrt(2.0) * np.sin(n * np.pi * X[:, 0])
        r = np.linalg.norm(X, axis=1)
        S = self._harmonic.solid_value(X)
        return self._amp * self._z**self._harmonic.l * _jhat(self._harmonic.l, self._z * r) * S

    def grad(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.d == 1:
            n = self.labels[0]
            return (math.sqrt(2.0) * n * np.pi * np.cos(n * np.pi * X[:, 0]))[:, None]
        l = self._harmonic.l
        z = self._z
        r = np.linalg.norm(X, axis=1)
        S = self._harmonic.solid_value(X)
        dS = self._harmonic.solid_gradient(X)
        jh = _jhat(l, z * r)
        jh1 = _jhat(l + 1, z * r)
        out = self._amp * z**l * (jh[:, None] * dS - z**2 * jh1[:, None] * X * S[:, None])
        return out


def interval_eigenpair(n: int):
    """(mu_n, omega_n) of the Dirichlet interval: mu = -(n pi)^2."""
    if n < 1:
        raise ValueError("mode index must be >= 1")
    return -(n * np.pi) ** 2, Mode(index=n, mu=-(n * np.pi) ** 2, d=1, labels=(n,))


def ball_eigenpair(l: int, m: int, n: int):
    """(mu, omega) for the ball mode (l, m, n); |m| <= l."""
    if abs(m) > l:
        raise ValueError("need |m| <= l")
    z = bessel_zero(l, n)
    # integral of j_l(z r)^2 r^2 dr over [0,1] equals j_{l+1}(z)^2 / 2 at a zero
    amp = math.sqrt(2.0) / abs(spherical_jn(l + 1, z))
    mode = Mode(index=0, mu=-z * z, d=3, labels=(l, m, n),
                _harmonic=RealSphericalHarmonic(l, m), _z=z, _amp=amp)
    return -z * z, mode


class SpectralBasis:
    """The first M Dirichlet eigenpairs sorted by |mu| (ties by (l, m, n))."""

    def __init__(self, d: int, M: int):
        if d not in (1, 3):
            raise ValueError("dimension must be 1 or 3")
        if M < 1:
            raise ValueError("cutoff must be positive")
        self.d = d
        self.M = M
        self.modes: list[Mode] = []
        if d == 1:
            for n in range(1, M + 1):
                mu, mode = interval_eigenpair(n)
                mode.index = n
                self.modes.append(mode)
        else:
            self.modes = self._enumerate_ball(M)
        self.mu = np.array([m.mu for m in self.modes])

    @staticmethod
    def _enumerate_ball(M: int) -> list[Mode]:
        # grow a z-bound until the radial blocks below it cover M modes
        Z = np.pi * max(4.0, (9.0 * np.pi * M / 2.0) ** (1.0 / 3.0) / np.pi + 2.0)
        while True:
            radial: list[tuple[float, int, int]] = []
            count = 0
            for l in range(MAX_BESSEL_ORDER + 1):
                if bessel_zero(l, 1) > Z:
                    break
                n = 1
                while n <= MAX_BESSEL_ZEROS:
                    z = bessel_zero(l, n)
                    if z > Z:
                        break
                    radial.append((z, l, n))
                    count += 2 * l + 1
                    n += 1
            else:
                if count < M:
                    raise ZeroTableExhausted(
                        "zero table exhausted while enumerating the ball basis")
            if count >= M:
                break
            Z *= 1.5
        radial.sort(key=lambda t: (t[0], t[1], t[2]))
        modes: list[Mode] = []
        for z, l, n in radial:
            for m in range(-l, l + 1):
                _, mode = ball_eigenpair(l, m, n)
                mode.index = len(modes) + 1
                modes.append(mode)
                if len(modes) == M:
                    return modes
        raise ZeroTableExhausted("zero table exhausted while enumerating the ball basis")

    # -- evaluation ---------------------------------------------------------
    def value_matrix(self, X, m: int | None = None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        m = self.M if m is None else m
        return np.column_stack([self.modes[i].value(X) for i in range(m)])

    def gradient_tensor(self, X, m: int | None = None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        m = self.M if m is None else m
        return np.stack([self.modes[i].grad(X) for i in range(m)], axis=0)

    def values_at(self, x0) -> np.ndarray:
        """omega_n(x0) for all modes."""
        return self.value_matrix(np.atleast_2d(np.asarray(x0, dtype=float)))[0]

    def gradients_at(self, x0) -> np.ndarray:
        """(M, d) array of grad omega_n (x0)."""
        return self.gradient_tensor(np.atleast_2d(np.asarray(x0, dtype=float)))[:, 0, :]

    def normalization_residuals(self, upto: int | None = None) -> np.ndarray:
        """| ||omega_n|| - 1 | per mode via radial quadrature (exact 0 in d=1)."""
        upto = self.M if upto is None else upto
        res = np.zeros(upto)
        if self.d == 1:
            return res
        from .quadrature import gauss_segment

        r, w = gauss_segment(0.0, 1.0, 120)
        cache: dict[tuple[int, int], float] = {}
        for i in range(upto):
            l, m, n = self.modes[i].labels
            key = (l, n)
            if key not in cache:
                z = bessel_zero(l, n)
                amp = self.modes[i]._amp
                val = amp**2 * np.sum(w * spherical_jn(l, z * r) ** 2 * r**2)
                cache[key] = abs(math.sqrt(val) - 1.0)
            res[i] = cache[key]
        return res
