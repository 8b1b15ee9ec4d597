"""Closed-form densities and transition kernels.

Conventions: ``phi(x) = exp(-|x|)/2``; ``phi_d(m, .)`` is its ``m``-th
derivative for ``m >= 0`` and its ``|m|``-fold iterated tail antiderivative
for ``m < 0``.  Spectral points are nonincreasing vectors of length
``floor((k+1)/2)``; particle configurations are nondecreasing vectors of
length ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError
from .linalg import det_lu

__all__ = [
    "KernelMatrix", "phi", "phi_d", "q_kernel", "p_r", "c_const", "d_func",
    "P_kernel", "a_coeff", "Q_kernel", "det_lu", "lower_inc_gamma_int",
    "cdf_last_particle", "cdf_first_particle_exact", "spectral_dim",
]


@dataclass
class KernelMatrix:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise InvalidInputError("kernel matrix must be square of order >= 1")
        if not np.all(np.isfinite(e)):
            raise InvalidInputError("kernel matrix has non-finite entries")
        self.entries = e

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def det(self) -> float:
        return det_lu(self.entries)


def spectral_dim(k: int) -> int:
    """Number of positive eigenvalues, ``floor((k+1)/2)``."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return (k + 1) // 2


def phi(x):
    return 0.5 * np.exp(-np.abs(x))


def phi_d(m: int, x):
    """Derivative (``m > 0``) or iterated antiderivative (``m < 0``) of ``phi``.

    For ``x >= 0`` every order equals ``(-1)^m exp(-x)/2``.  For ``x < 0``
    positive orders give ``exp(x)/2`` and negative orders ``-|m|`` add the
    polynomial ``-sum_i x^(|m|-2i+1) / (|m|-2i+1)!``.  The point ``x = 0``
    takes the ``x >= 0`` branch.
    """
    m = int(m)
    x = np.asarray(x, dtype=float)
    right = 0.5 * (-1.0) ** m * np.exp(-np.abs(x))
    left = 0.5 * np.exp(np.minimum(x, 0.0))
    if m < 0:
        mm = -m
        poly = np.zeros_like(x)
        for i in range(1, (mm + 1) // 2 + 1):
            e = mm - (2 * i - 1)
            poly = poly + x ** e / math.factorial(e)
        left = left - poly
    out = np.where(x >= 0, right, left)
    return float(out) if out.ndim == 0 else out


def q_kernel(x, y):
    """Transition density of ``|S_n|``: ``phi(x + y) + phi(x - y)`` on the quadrant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("q_kernel is defined for x, y >= 0")
    out = phi(x + y) + phi(x - y)
    return float(out) if out.ndim == 0 else out


def p_r(r: float, x, y):
    """Transition density of the walk blocked at level ``r``, on ``[r, inf)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < r) or np.any(y < r):
        raise DomainError("p_r needs x, y >= r")
    out = phi(x - y) + math.exp(2.0 * r) * phi(x + y)
    return float(out) if out.ndim == 0 else out


def c_const(k: int) -> float:
    p = spectral_dim(k)
    c = 2.0 ** (k // 2)
    for i in range(1, p + 1):
        for j in range(i + 1, p + 1):
            c *= (j - i) * (k + 1 - j - i)
    if k == 2 * p:
        for i in range(1, p + 1):
            c *= p + 0.5 - i
    return c


def d_func(k: int, x):
    """Volume function ``d_k``; vectorised over leading axes of ``x``."""
    p = spectral_dim(k)
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (p,):
        raise InvalidInputError(f"d_{k} takes vectors of length {p}")
    if k == 1:
        out = np.ones(x.shape[:-1])
    else:
        out = np.ones(x.shape[:-1])
        for i in range(p):
            for j in range(i + 1, p):
                out = out * (x[..., i] ** 2 - x[..., j] ** 2)
        if k % 2 == 0:
            out = out * np.prod(x, axis=-1)
        out = out / c_const(k)
    return float(out) if out.ndim == 0 else out


def _check_chamber(v, p, what):
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (p,):
        raise InvalidInputError(f"{what} must have length {p}")
    if np.any(v[..., -1] <= 0) or np.any(np.diff(v, axis=-1) >= 0):
        raise DomainError(f"{what} must be strictly decreasing and positive")
    return v


def P_kernel(k: int, lam, beta):
    """Transition density of the positive spectrum, on the open chamber."""
    p = spectral_dim(k)
    lam = _check_chamber(lam, p, "lambda")
    beta = _check_chamber(beta, p, "beta")
    sign = (-1.0) ** (k + 1)
    li = lam[..., :, None]
    bj = beta[..., None, :]
    mat = phi(li - bj) + sign * phi(li + bj)
    out = d_func(k, beta) / d_func(k, lam) * det_lu(mat)
    return float(out) if np.ndim(out) == 0 else out


def a_coeff(i: int, j: int, x, xp):
    """Entry ``a_ij(x, x')`` of the particle transition determinant."""
    m = j - i
    out = (-1.0) ** (i - 1) * phi_d(m, np.add(x, xp)) + (-1.0) ** (i + j) * phi_d(m, np.subtract(x, xp))
    return float(out) if np.ndim(out) == 0 else out


def _check_ordered(v, k, what):
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (k,):
        raise InvalidInputError(f"{what} must have length {k}")
    if np.any(v[..., 0] < 0) or np.any(np.diff(v, axis=-1) < 0):
        raise DomainError(f"{what} must be nondecreasing and nonnegative")
    return v


def Q_kernel(k: int, y, yp):
    """Transition density of the particle system, ``det(a_ij(y_i, y'_j))``."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    y = _check_ordered(y, k, "y")
    yp = _check_ordered(yp, k, "y'")
    shape = np.broadcast_shapes(y.shape[:-1], yp.shape[:-1])
    mat = np.empty(shape + (k, k))
    for i in range(k):
        for j in range(k):
            mat[..., i, j] = a_coeff(i + 1, j + 1, y[..., i], yp[..., j])
    out = det_lu(mat)
    return float(out) if np.ndim(out) == 0 else out


def lower_inc_gamma_int(m: int, t: float) -> float:
    """``int_0^t x^m e^-x dx`` for integer ``m >= 0``."""
    if int(m) != m or m < 0:
        raise InvalidInputError("m must be a nonnegative integer")
    if t < 0:
        raise InvalidInputError("t must be >= 0")
    m = int(m)
    if math.isinf(t):
        return float(math.factorial(m))
    if t < m + 1:
        # tail form m! e^-t sum_{i>m} t^i/i! avoids cancellation for small t
        term = t ** (m + 1) / math.factorial(m + 1)
        s = 0.0
        i = m + 1
        while term > 1e-17 * s or s == 0.0:
            s += term
            i += 1
            term *= t / i
            if term == 0.0:
                break
        return math.factorial(m) * math.exp(-t) * s
    partial = sum(t ** i / math.factorial(i) for i in range(m + 1))
    return math.factorial(m) * (1.0 - math.exp(-t) * partial)


def _cdf_exponents(k: int, n: int) -> np.ndarray:
    p = spectral_dim(k)
    if n < p:
        raise DomainError(f"the determinant formula needs n >= {p}")
    even = 1 if k % 2 == 0 else 0
    i = np.arange(1, p + 1)[:, None]
    j = np.arange(1, p + 1)[None, :]
    return 2 * j + i + n - p - 3 + even


def cdf_last_particle(k: int, n: int, t: float, normalized: bool = True) -> float:
    """Determinant of incomplete gamma integrals for ``P(X_k(n) <= t)``.

    With ``normalized`` the value is divided by its ``t -> inf`` limit.  The
    raw determinant is not a distribution function in general (its limit is
    not 1), and even normalised it does not match simulation for
    ``k = 1, n >= 2``; see :func:`cdf_first_particle_exact`.
    """
    e = _cdf_exponents(k, n)
    if t < 0:
        raise InvalidInputError("t must be >= 0")
    mat = np.vectorize(lambda m: lower_inc_gamma_int(int(m), t))(e).astype(float)
    raw = det_lu(mat)
    if not normalized:
        return raw
    full = det_lu(np.vectorize(lambda m: float(math.factorial(int(m))))(e).astype(float))
    return raw / full


def cdf_first_particle_exact(n: int, t):
    """Exact CDF of ``X_1(n)`` for ``n`` in {1, 2}.

    ``X_1(n)`` has the law of ``|S_n|`` for a Laplace walk: ``1 - e^-t`` at
    ``n = 1`` and ``1 - e^-t - t e^-t / 2`` at ``n = 2``.
    """
    t = np.asarray(t, dtype=float)
    if n == 1:
        out = -np.expm1(-t)
    elif n == 2:
        out = -np.expm1(-t) - 0.5 * t * np.exp(-t)
    else:
        raise InvalidInputError("exact oracle available for n = 1, 2 only")
    out = np.where(t < 0, 0.0, out)
    return float(out) if out.ndim == 0 else out
