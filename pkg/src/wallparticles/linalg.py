"""Small dense linear algebra, batched over leading axes."""

from __future__ import annotations

import numpy as np

from .errors import NumericError


def det_lu(m) -> np.ndarray | float:
    """Determinant by LU factorisation with partial pivoting.

    ``m`` has shape ``(..., n, n)``.  A zero pivot column gives 0.
    """
    a = np.array(m, dtype=float, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("det_lu needs square matrices")
    scalar = a.ndim == 2
    a = a.reshape((-1,) + a.shape[-2:])
    n = a.shape[-1]
    det = np.ones(a.shape[0])
    rows = np.arange(a.shape[0])
    for c in range(n):
        piv = c + np.argmax(np.abs(a[:, c:, c]), axis=1)
        swap = piv != c
        if np.any(swap):
            tmp = a[rows, c].copy()
            a[rows, c] = a[rows, piv]
            a[rows, piv] = tmp
            det = np.where(swap, -det, det)
        p = a[:, c, c]
        det = det * p
        ok = p != 0
        if c + 1 < n:
            f = np.divide(a[:, c + 1:, c], p[:, None], out=np.zeros_like(a[:, c + 1:, c]),
                          where=ok[:, None])
            a[:, c + 1:, c + 1:] -= f[:, :, None] * a[:, c, None, c + 1:]
    det = det.reshape(np.shape(m)[:-2])
    return float(det) if scalar else det


def jacobi_singular_values(a, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Singular values by one-sided (Hestenes) Jacobi, sorted decreasingly.

    Column pairs are orthogonalised by plane rotations until every pair is
    orthogonal to relative precision ``tol``; the column norms are then the
    singular values.  Works on ``(..., m, n)`` stacks.
    """
    a = np.array(a, dtype=float, copy=True)
    if not np.all(np.isfinite(a)):
        raise NumericError("non-finite matrix entries")
    shape = a.shape
    u = a.reshape((-1,) + shape[-2:])
    n = shape[-1]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap = u[:, :, p]
                aq = u[:, :, q]
                alpha = np.einsum("ij,ij->i", ap, ap)
                beta = np.einsum("ij,ij->i", aq, aq)
                gamma = np.einsum("ij,ij->i", ap, aq)
                act = np.abs(gamma) > tol * np.sqrt(alpha * beta)
                if not np.any(act):
                    continue
                rotated = True
                g = np.where(act, gamma, 1.0)
                zeta = (beta - alpha) / (2.0 * g)
                t = np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                t = np.where(zeta == 0, 1.0, t)
                t = np.where(act, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_p = c[:, None] * ap - s[:, None] * aq
                new_q = s[:, None] * ap + c[:, None] * aq
                u[:, :, p] = new_p
                u[:, :, q] = new_q
        if not rotated:
            break
    sv = np.sqrt(np.einsum("bij,bij->bj", u, u))
    sv = -np.sort(-sv, axis=-1)
    return sv.reshape(shape[:-2] + (n,))
