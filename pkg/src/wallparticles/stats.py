"""Two-sample and goodness-of-fit tests used by the verification harness."""

from __future__ import annotations

import numpy as np
from scipy import stats as _st
from scipy.spatial.distance import cdist

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

from . import rng as _rng
from .errors import InvalidInputError


def ks2(a, b):
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise InvalidInputError("ks2 needs nonempty samples")
    res = _st.ks_2samp(a, b, method="asymp")
    return float(res.statistic), float(res.pvalue)


def ecdf_sup_error(sample, cdf):
    """``sup_t |F_n(t) - F(t)|`` against an exact CDF (one-sample KS distance)."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    f = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def _energy_exact(pooled, labels):
    d = cdist(pooled, pooled)
    x = labels
    nx = x.sum()
    ny = (~x).sum()
    sxy = d[np.ix_(x, ~x)].sum()
    sxx = d[np.ix_(x, x)].sum()
    syy = d[np.ix_(~x, ~x)].sum()
    return 2 * sxy / (nx * ny) - sxx / nx ** 2 - syy / ny ** 2


def _within_sums(z_sorted, lab_sorted):
    """Sum of ``|z_i - z_j|`` over unordered pairs inside the labelled subset.

    With values sorted, the element of within-subset rank ``r`` (1-based)
    among ``n`` contributes ``z * (2r - n - 1)``.
    """
    w = lab_sorted.astype(np.float64)
    r = np.cumsum(w, axis=-1)
    n = r[..., -1:]
    return np.sum(w * z_sorted * (2 * r - n - 1), axis=-1)


def _energy_sliced_prep(pooled, n_dirs, stream):
    dim = pooled.shape[1]
    if dim == 1:
        dirs = np.ones((1, 1))
    else:
        g = stream.normal((n_dirs, dim))
        dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    proj = dirs @ pooled.T
    order = np.argsort(proj, axis=1, kind="stable")
    z = np.take_along_axis(proj, order, axis=1)
    ones = np.ones_like(z, dtype=bool)
    total = _within_sums(z, ones)
    return z, order, total


def _sliced_kernel(z, order, total, labels):
    n_dirs, n = z.shape
    nx = 0
    for i in range(n):
        if labels[i]:
            nx += 1
    ny = n - nx
    acc = 0.0
    for d in range(n_dirs):
        rx = 0
        ry = 0
        sxx = 0.0
        syy = 0.0
        for i in range(n):
            v = z[d, i]
            w = 1 if labels[order[d, i]] else 0
            rx += w
            ry += 1 - w
            # branch-free: only one of the two terms is nonzero
            sxx += w * v * (2 * rx - nx - 1)
            syy += (1 - w) * v * (2 * ry - ny - 1)
        sxy = total[d] - sxx - syy
        acc += 2 * sxy / (nx * ny) - 2 * sxx / (nx * nx) - 2 * syy / (ny * ny)
    return acc / n_dirs


if numba is not None:
    _sliced_kernel = numba.njit(cache=True)(_sliced_kernel)


def _energy_sliced(prep, labels, use_numba=True):
    z, order, total = prep
    if use_numba and numba is not None:
        return float(_sliced_kernel(z, order, total, labels))
    lab = labels[order]
    sxx = _within_sums(z, lab)
    syy = _within_sums(z, ~lab)
    sxy = total - sxx - syy
    nx = labels.sum()
    ny = labels.size - nx
    e = 2 * sxy / (nx * ny) - 2 * sxx / nx ** 2 - 2 * syy / ny ** 2
    return float(np.mean(e))


def energy_test(a, b, n_perm: int, stream: _rng.NoiseStream, method: str = "auto",
                n_dirs: int = 64, exact_max: int = 3000):
    """Energy-distance permutation test.

    Returns ``(statistic, p_value)`` with statistic ``nm/(n+m) * E`` where
    ``E`` is the V-statistic energy distance.  ``method="sliced"`` averages
    the one-dimensional energy distance over ``n_dirs`` random directions
    (proportional to the full energy distance in expectation), which runs in
    ``O(N log N)``; ``"auto"`` uses the exact pairwise form up to
    ``exact_max`` pooled points.  The permutation p-value is
    ``(1 + #{T_perm >= T_obs}) / (n_perm + 1)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[1] != b.shape[1]:
        raise InvalidInputError("samples have different dimensions")
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise InvalidInputError("energy_test needs nonempty samples")
    if n_perm < 100:
        raise InvalidInputError("n_perm must be >= 100")
    pooled = np.concatenate([a, b])
    labels = np.zeros(pooled.shape[0], dtype=bool)
    labels[:a.shape[0]] = True
    if method == "auto":
        method = "exact" if pooled.shape[0] <= exact_max else "sliced"
    if method == "exact":
        stat = lambda lab: _energy_exact(pooled, lab)
    elif method == "sliced":
        prep = _energy_sliced_prep(pooled, n_dirs, stream.child(_rng.AUX))
        stat = lambda lab: _energy_sliced(prep, lab)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    scale = a.shape[0] * b.shape[0] / pooled.shape[0]
    t_obs = stat(labels)
    perm_stream = stream.child(_rng.PERM)
    keys = perm_stream.uniform((n_perm, pooled.shape[0]))
    count = 0
    # rounding guard: equal-valued permutations must count as ties
    spread = float(np.mean(np.abs(pooled - pooled.mean(axis=0)))) + 1e-300
    tol = 1e-10 * (abs(t_obs) + spread)
    for i in range(n_perm):
        lab = labels[np.argsort(keys[i])]
        if stat(lab) >= t_obs - tol:
            count += 1
    return scale * t_obs, (1 + count) / (n_perm + 1)


def chi2_cells(counts, probs, min_expected: float = 5.0):
    """Pearson chi-square of observed cell counts against exact cell probabilities.

    Cells whose expected count falls below ``min_expected`` are pooled into
    one.  Returns ``(statistic, dof, p_value)``.
    """
    counts = np.asarray(counts, dtype=float).ravel()
    probs = np.asarray(probs, dtype=float).ravel()
    n = counts.sum()
    exp = n * probs
    small = exp < min_expected
    if np.any(small):
        counts = np.append(counts[~small], counts[small].sum())
        exp = np.append(exp[~small], exp[small].sum())
        keep = exp > 0
        counts, exp = counts[keep], exp[keep]
    stat = float(np.sum((counts - exp) ** 2 / exp))
    dof = counts.size - 1
    return stat, dof, float(_st.chi2.sf(stat, dof))
