"""Light scalar-field abstraction shared by the functional and solver layers.

A field maps point batches of shape (N, d) to values of shape (N,).  Fields
optionally expose an analytic gradient; consumers fall back to central
differences when it is absent.  Linear combinations keep gradients when all
members have one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FD_STEP = 1e-5


def as_points(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 and d == 1:
        return X[:, None]
    if X.ndim == 1 and X.shape[0] == d:
        return X[None, :]
    if X.ndim == 2 and X.shape[1] == d:
        return X
    raise ValueError(f"expected points of shape (N, {d})")


class ScalarField:
    """Base class; subclasses implement value(X) and may implement gradient."""

    name = "field"

    def value(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def has_gradient(self) -> bool:
        return type(self).gradient is not ScalarField.gradient

    def gradient(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        n, d = X.shape
        out = np.zeros((n, d), dtype=complex)
        for i in range(d):
            e = np.zeros(d)
            e[i] = FD_STEP
            out[:, i] = (self.value(X + e) - self.value(X - e)) / (2.0 * FD_STEP)
        if np.all(np.abs(out.imag) == 0.0):
            return out.real
        return out

    def __add__(self, other):
        return LinearCombination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return LinearCombination([(1.0, self), (-1.0, other)])

    def __rmul__(self, c):
        return LinearCombination([(c, self)])


@dataclass
class CallableField(ScalarField):
    """Wrap plain callables.  `fn` maps (N, d) -> (N,); `gradient` is optional."""

    fn: callable
    gradient_fn: callable = None
    name: str = "field"

    def __init__(self, fn, gradient=None, name="field"):
        self.fn = fn
        self.gradient_fn = gradient
        self.name = name

    def value(self, X):
        return np.asarray(self.fn(X))

    def has_gradient(self):
        return self.gradient_fn is not None

    def gradient(self, X):
        if self.gradient_fn is None:
            return ScalarField.gradient(self, X)
        return np.asarray(self.gradient_fn(X))


class LinearCombination(ScalarField):
    def __init__(self, terms):
        flat = []
        for c, f in terms:
            if isinstance(f, LinearCombination):
                flat.extend((c * ci, fi) for ci, fi in f.terms)
            else:
                flat.append((c, f))
        self.terms = flat
        self.name = "+".join(f.name for _, f in flat)

    def value(self, X):
        out = None
        for c, f in self.terms:
            v = c * np.asarray(f.value(X))
            out = v if out is None else out + v
        return out

    def has_gradient(self):
        return all(f.has_gradient() for _, f in self.terms)

    def gradient(self, X):
        out = None
        for c, f in self.terms:
            g = c * np.asarray(f.gradient(X))
            out = g if out is None else out + g
        return out


class SeriesField(ScalarField):
    """Finite expansion over a spectral basis; gradient is analytic."""

    def __init__(self, basis, coeffs, name="series"):
        coeffs = np.asarray(coeffs)
        if len(coeffs) > basis.M:
            raise ValueError("more coefficients than basis modes")
        self.basis = basis
        self.coeffs = coeffs
        self.name = name

    def value(self, X):
        V = self.basis.value_matrix(X, len(self.coeffs))
        out = V @ self.coeffs
        return out.real if np.isrealobj(self.coeffs) else out

    def has_gradient(self):
        return True

    def gradient(self, X):
        G = self.basis.gradient_tensor(X, len(self.coeffs))
        out = np.tensordot(G, self.coeffs, axes=([0], [0]))
        return out.real if np.isrealobj(self.coeffs) else out


class ZeroField(ScalarField):
    name = "zero"

    def value(self, X):
        return np.zeros(np.atleast_2d(X).shape[0])

    def has_gradient(self):
        return True

    def gradient(self, X):
        X = np.atleast_2d(X)
        return np.zeros_like(X)


@dataclass
class DecomposedField:
    """A field split per the unique puncture decomposition: a regular part
    (coefficients over the Dirichlet basis, Dirichlet-zero on the boundary)
    plus coefficients over the singular puncture basis chi_0..chi_d."""

    regular_coeffs: np.ndarray
    singular: np.ndarray
    basis: object
    bundle: object
    projection_residual: float = 0.0

    @property
    def regular_field(self) -> SeriesField:
        return SeriesField(self.basis, self.regular_coeffs, name="regular")

    def assemble(self) -> ScalarField:
        terms = [(1.0, self.regular_field)]
        for j, c in enumerate(self.singular):
            if c != 0.0:
                terms.append((c, self.bundle.puncture_field(j)))
        return LinearCombination(terms)
