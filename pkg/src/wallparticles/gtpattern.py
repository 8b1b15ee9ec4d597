"""Interlaced triangular arrays with a fixed top row.

A pattern for ``k`` holds rows ``x^(2), ..., x^(k+1)``; row ``i`` has
``floor(i/2)`` nonnegative entries and the top row is the spectral point.
Consecutive rows interlace: with ``x`` the upper row and ``y`` the lower,
``x_1 >= y_1 >= x_2 >= ...``, ending with ``x_n >= y_n`` when the rows have
equal length and with ``y_n >= x_{n+1}`` when the upper row is longer.

Batched routines keep one array per row, shape ``(N, len)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import DomainError, InvalidInputError
from .kernels import d_func, spectral_dim


def row_lengths(k: int) -> list[int]:
    return [i // 2 for i in range(2, k + 2)]


@dataclass
class GTPattern:
    k: int
    rows: list

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        rows = [np.atleast_1d(np.asarray(r, dtype=float)) for r in self.rows]
        if [r.size for r in rows] != row_lengths(self.k):
            raise InvalidInputError(f"row lengths must be {row_lengths(self.k)}")
        self.rows = rows

    @property
    def top(self) -> np.ndarray:
        return self.rows[-1]


def interlaces(upper, lower, strict: bool = False) -> bool:
    """``upper >= lower`` in the interlacing order (nonnegativity not included)."""
    x = np.asarray(upper, dtype=float)
    y = np.asarray(lower, dtype=float)
    if x.size not in (y.size, y.size + 1):
        raise InvalidInputError("rows must have equal length or differ by one")
    ge = np.greater if strict else np.greater_equal
    if not np.all(ge(x[:y.size], y)):
        return False
    if not np.all(ge(y[:x.size - 1], x[1:])):
        return False
    return True


def interlace_det(x, y) -> float:
    """``det(1{x_i > y_j})`` for strictly decreasing ``x, y`` of equal length.

    Equals 1 exactly when ``x_1 > y_1 > x_2 > ... > x_n > y_n`` and 0
    otherwise.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    from .linalg import det_lu
    return det_lu((x[:, None] > y[None, :]).astype(float))


def is_interlaced(p: GTPattern) -> bool:
    if any(np.any(r < 0) for r in p.rows):
        return False
    if np.any(np.diff(p.top) > 0):
        return False
    return all(interlaces(p.rows[i + 1], p.rows[i]) for i in range(len(p.rows) - 1))


def project(p: GTPattern) -> np.ndarray:
    """First entry of every row, bottom to top; lies in the closed particle chamber."""
    return np.array([r[0] for r in p.rows])


def _check_lambda(k, lam, allow_zero=False):
    p = spectral_dim(k)
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1:] != (p,):
        raise InvalidInputError(f"lambda must have length {p}")
    if allow_zero and np.all(lam == 0):
        return lam
    if np.any(lam[..., -1] <= 0) or np.any(np.diff(lam, axis=-1) >= 0):
        raise DomainError("lambda must lie in the open chamber (strictly decreasing, positive)")
    return lam


def _bounds(rows, r, j):
    """Interval allowed to entry ``j`` of row ``r`` given its neighbours."""
    up = rows[r + 1]
    lo = up[:, j + 1] if j + 1 < up.shape[1] else np.zeros(up.shape[0])
    hi = up[:, j]
    if r > 0:
        dn = rows[r - 1]
        if j < dn.shape[1]:
            lo = np.maximum(lo, dn[:, j])
        if 1 <= j <= dn.shape[1]:
            hi = np.minimum(hi, dn[:, j - 1])
    return np.maximum(lo, 0.0), hi


def midpoint_rows(k: int, lam) -> list:
    """Feasible interior starting point: each row at midpoints of the row above."""
    lam = np.atleast_2d(lam)
    rows = [None] * k
    rows[-1] = lam.copy()
    for r in range(k - 2, -1, -1):
        up = rows[r + 1]
        n = row_lengths(k)[r]
        nxt = np.concatenate([up[:, 1:], np.zeros((up.shape[0], 1))], axis=1)
        rows[r] = 0.5 * (up + nxt)[:, :n]
    return rows


def gibbs_batch(k: int, lam, sweeps: int, stream: _rng.NoiseStream) -> list:
    """Gibbs sampler for the uniform law on each ``GT_k(lam[b])``.

    Every sweep redraws each free entry, bottom row first, uniformly on
    the interval left by its neighbours.
    """
    if sweeps < 1:
        raise InvalidInputError("sweeps must be >= 1")
    lam = _check_lambda(k, np.atleast_2d(np.asarray(lam, dtype=float)))
    rows = midpoint_rows(k, lam)
    nfree = sum(row_lengths(k)[:-1])
    if nfree == 0:
        return rows
    n = lam.shape[0]
    u = stream.uniform((sweeps, nfree, n))
    for s in range(sweeps):
        c = 0
        for r in range(k - 1):
            for j in range(rows[r].shape[1]):
                lo, hi = _bounds(rows, r, j)
                rows[r][:, j] = lo + (hi - lo) * u[s, c]
                c += 1
    return rows


def sample_uniform(k: int, lam, sweeps: int, stream: _rng.NoiseStream) -> GTPattern:
    rows = gibbs_batch(k, lam, sweeps, stream)
    return GTPattern(k, [r[0] for r in rows])


def project_batch(rows) -> np.ndarray:
    return np.stack([r[:, 0] for r in rows], axis=1)


def sample_L(k: int, lam, sweeps: int, stream: _rng.NoiseStream) -> np.ndarray:
    """Draws from ``L_k(lam, .)``: a uniform pattern pushed through :func:`project`.

    ``lam`` is ``(N, p)``.  Rows with ``lam = 0`` give the all-zeros point,
    the degenerate pattern being the only element of ``GT_k(0)``.
    """
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    zero = np.all(lam == 0, axis=1)
    out = np.zeros((lam.shape[0], k))
    if np.any(~zero):
        rows = gibbs_batch(k, lam[~zero], sweeps, stream)
        out[~zero] = project_batch(rows)
    return out


def rejection_batch(k: int, lam, n: int, stream: _rng.NoiseStream, max_rounds: int = 10_000) -> list:
    """Exact uniform samples by rejection from the box ``[0, lam_1]^free``."""
    lam = _check_lambda(k, np.asarray(lam, dtype=float))
    lens = row_lengths(k)
    nfree = sum(lens[:-1])
    got = []
    total = 0
    for _ in range(max_rounds):
        if total >= n:
            break
        m = max(4 * (n - total), 1024)
        u = stream.uniform((m, nfree)) * lam[0]
        rows, ok = _split_check(k, lam, u)
        flat = u[ok]
        got.append(flat)
        total += flat.shape[0]
    flat = np.concatenate(got)[:n]
    return _rows_from_flat(k, lam, flat)


def _rows_from_flat(k, lam, flat):
    lens = row_lengths(k)
    rows = []
    c = 0
    for L in lens[:-1]:
        rows.append(flat[:, c:c + L])
        c += L
    rows.append(np.broadcast_to(lam, (flat.shape[0], lens[-1])).copy())
    return rows


def _split_check(k, lam, flat):
    rows = _rows_from_flat(k, lam, flat)
    ok = np.ones(flat.shape[0], dtype=bool)
    for r in range(k - 1):
        ok &= np.all(rows[r] >= 0, axis=1)
        up, dn = rows[r + 1], rows[r]
        ok &= np.all(up[:, :dn.shape[1]] >= dn, axis=1)
        ok &= np.all(dn[:, :up.shape[1] - 1] >= up[:, 1:], axis=1)
    return rows, ok


def volume_mc(k: int, lam, n_samples: int, stream: _rng.NoiseStream, chunk: int = 1 << 18):
    """Rejection estimate of the volume of ``GT_k(lam)`` and its standard error."""
    lam = _check_lambda(k, np.asarray(lam, dtype=float))
    nfree = sum(row_lengths(k)[:-1])
    box = float(lam[0]) ** nfree
    if nfree == 0:
        return 1.0, 0.0
    hits = 0
    left = n_samples
    while left > 0:
        m = min(chunk, left)
        u = stream.uniform((m, nfree)) * lam[0]
        _, ok = _split_check(k, lam, u)
        hits += int(ok.sum())
        left -= m
    frac = hits / n_samples
    return box * frac, box * np.sqrt(frac * (1 - frac) / n_samples)


def L_density(k: int, lam, p: GTPattern) -> float:
    """Density of the uniform law on ``GT_k(lam)`` at pattern ``p``."""
    lam = _check_lambda(k, np.asarray(lam, dtype=float))
    if p.k != k or not np.array_equal(p.top, lam) or not is_interlaced(p):
        return 0.0
    return 1.0 / d_func(k, lam)
