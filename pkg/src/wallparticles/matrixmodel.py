"""Random walk on antisymmetric matrices and its spectral projections.

A real antisymmetric ``A`` stands for the Hermitian matrix ``M = iA``.  The
eigenvalues of ``iA`` are ``+-`` the singular values of ``A`` (plus a zero
when the dimension is odd), so everything here works with real arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import InvalidInputError, NumericError
from .linalg import jacobi_singular_values
from .parallel import DEFAULT_BLOCK, map_blocks

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass
class AntisymMatrix:
    """Antisymmetric matrix stored by its strict upper triangle."""

    dim: int
    upper: np.ndarray

    @classmethod
    def from_dense(cls, a) -> "AntisymMatrix":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError("need a square matrix")
        if not np.allclose(a, -a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
            raise InvalidInputError("matrix is not antisymmetric")
        iu = np.triu_indices(a.shape[0], 1)
        return cls(a.shape[0], a[iu].copy())

    def dense(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        iu = np.triu_indices(self.dim, 1)
        a[iu] = self.upper
        return a - a.T

    def __add__(self, other: "AntisymMatrix") -> "AntisymMatrix":
        if other.dim != self.dim:
            raise InvalidInputError("dimension mismatch")
        return AntisymMatrix(self.dim, self.upper + other.upper)


def increment_from_factor(y) -> np.ndarray:
    """``Y J Y^T`` for ``Y`` of shape ``(..., d, 2)``; entries ``Y_a1 Y_b2 - Y_a2 Y_b1``."""
    y = np.asarray(y, dtype=float)
    c0 = y[..., :, 0]
    c1 = y[..., :, 1]
    return c0[..., :, None] * c1[..., None, :] - c1[..., :, None] * c0[..., None, :]


def sample_increment(k: int, stream: _rng.NoiseStream) -> AntisymMatrix:
    """One increment ``Y J Y^T`` with ``Y`` a standard Gaussian ``(k+1) x 2`` matrix."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    y = stream.normal((k + 1, 2))
    return AntisymMatrix.from_dense(increment_from_factor(y))


def run_process(k: int, n_steps: int, stream: _rng.NoiseStream) -> list[AntisymMatrix]:
    """Partial sums ``A(0) = 0, A(n) = A(n-1) + increment``."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if n_steps < 0:
        raise InvalidInputError("n_steps must be >= 0")
    d = k + 1
    cur = AntisymMatrix(d, np.zeros(d * (d - 1) // 2))
    out = [cur]
    for _ in range(n_steps):
        cur = cur + sample_increment(k, stream)
        out.append(cur)
    return out


def _dense(a):
    if isinstance(a, AntisymMatrix):
        return a.dense()
    a = np.asarray(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidInputError("need square matrices")
    return a


def positive_eigenvalues(a) -> np.ndarray:
    """The ``floor(d/2)`` largest eigenvalues of ``iA``, nonincreasing.

    Computed as singular values of ``A`` (each appears twice in the full
    singular spectrum of an antisymmetric matrix; one copy of each pair is
    kept).
    """
    a = _dense(a)
    if not np.all(np.isfinite(a)):
        raise NumericError("non-finite matrix entries")
    d = a.shape[-1]
    sv = jacobi_singular_values(a)
    return sv[..., 0:2 * (d // 2):2]


def minor_top_eigenvalues(a) -> np.ndarray:
    """Largest eigenvalue of ``iA`` restricted to each leading ``m x m`` block, ``m = 2..d``."""
    a = _dense(a)
    if not np.all(np.isfinite(a)):
        raise NumericError("non-finite matrix entries")
    d = a.shape[-1]
    if d < 2:
        raise InvalidInputError("dimension must be >= 2")
    out = np.empty(a.shape[:-2] + (d - 1,))
    for m in range(2, d + 1):
        out[..., m - 2] = jacobi_singular_values(a[..., :m, :m])[..., 0]
    return out


def canonical_form(lam, d: int) -> np.ndarray:
    """Block-diagonal antisymmetric matrix whose ``iA`` has positive spectrum ``lam``."""
    lam = np.asarray(lam, dtype=float)
    p = lam.shape[-1]
    if p != d // 2:
        raise InvalidInputError("spectrum length must be floor(d/2)")
    a = np.zeros(lam.shape[:-1] + (d, d))
    for j in range(p):
        a[..., 2 * j, 2 * j + 1] = lam[..., j]
        a[..., 2 * j + 1, 2 * j] = -lam[..., j]
    return a


def haar_orthogonal(stream: _rng.NoiseStream, size: int, d: int) -> np.ndarray:
    """Haar-distributed orthogonal matrices via sign-corrected QR of Gaussians."""
    z = stream.normal((size, d, d))
    q, r = np.linalg.qr(z)
    s = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    s = np.where(s == 0, 1.0, s)
    return q * s[:, None, :]


def _process_block(block, size, k, n_steps, seed, start):
    d = k + 1
    st = _rng.NoiseStream(seed, _rng.stream_id(_rng.MATRIX, block))
    y = st.normal((n_steps, size, d, 2))
    incs = increment_from_factor(y)
    out = np.empty((size, n_steps + 1, d, d))
    cur = np.zeros((size, d, d)) if start is None else np.broadcast_to(start, (size, d, d)).copy()
    out[:, 0] = cur
    for t in range(n_steps):
        cur = cur + incs[t]
        out[:, t + 1] = cur
    return out


def run_process_batch(k: int, n_steps: int, n_reps: int, seed: int, *, start=None,
                      jobs: int = 1, block_size: int = DEFAULT_BLOCK) -> np.ndarray:
    """Dense matrices ``A(t)``, shape ``(n_reps, n_steps + 1, k + 1, k + 1)``."""
    if k < 1 or n_steps < 0 or n_reps < 1:
        raise InvalidInputError("need k >= 1, n_steps >= 0, n_reps >= 1")
    return map_blocks(_process_block, n_reps, k, n_steps, seed, start,
                      jobs=jobs, block_size=block_size)
