"""Blocking/pushing particles on the half-line with a wall at 0.

Positions are stored as arrays whose last axis indexes particles
``1..k``; any leading axes are replicates.  The static particle at the wall
is implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import InvalidInputError
from .parallel import DEFAULT_BLOCK, map_blocks


@dataclass(frozen=True)
class ParticleState:
    """Ordered nonnegative positions ``0 <= x_1 <= ... <= x_k``."""

    positions: tuple

    def __post_init__(self):
        x = np.asarray(self.positions, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise InvalidInputError("positions must be a nonempty vector")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("positions must be finite")
        if x[0] < 0 or np.any(np.diff(x) < 0):
            raise InvalidInputError(f"positions not ordered on the half-line: {x}")
        object.__setattr__(self, "positions", tuple(float(v) for v in x))

    @property
    def k(self) -> int:
        return len(self.positions)

    def as_array(self) -> np.ndarray:
        return np.array(self.positions)


def _check_jumps(*jumps):
    for xi in jumps:
        if np.any(~(np.asarray(xi) > 0)):
            raise InvalidInputError("jump sizes must be strictly positive")


def _as_positions(s):
    return s.as_array() if isinstance(s, ParticleState) else np.asarray(s, dtype=float)


def half_step(x, xi_minus):
    """Left jumps blocked by the *old* position of the left neighbour."""
    x = np.asarray(x, dtype=float)
    left = np.concatenate([np.zeros_like(x[..., :1]), x[..., :-1]], axis=-1)
    return np.maximum(left, x - xi_minus)


def full_step(x_half, xi_plus):
    """Right jumps in label order, each pushed by the *new* left neighbour."""
    out = np.empty_like(x_half)
    prev = np.zeros_like(x_half[..., 0])
    for i in range(x_half.shape[-1]):
        prev = np.maximum(prev, x_half[..., i]) + xi_plus[..., i]
        out[..., i] = prev
    return out


def step(s, xi_minus, xi_plus, check: bool = True):
    """One unit of time: a blocked left half step, then a pushing right step.

    Accepts a :class:`ParticleState` (returns one) or an array of shape
    ``(..., k)`` (returns an array).
    """
    x = _as_positions(s)
    xi_minus = np.asarray(xi_minus, dtype=float)
    xi_plus = np.asarray(xi_plus, dtype=float)
    if check:
        _check_jumps(xi_minus, xi_plus)
    y = full_step(half_step(x, xi_minus), xi_plus)
    return ParticleState(y) if isinstance(s, ParticleState) else y


def step_onepass(s_prev, xi_minus, xi_plus, check: bool = True):
    """Same transition written as a single left-to-right sweep.

    ``X_i(n) = max(X_{i-1}(n), X_{i-1}(n-1), X_i(n-1) - xi^-_i) + xi^+_i``.
    """
    x = _as_positions(s_prev)
    xi_minus = np.asarray(xi_minus, dtype=float)
    xi_plus = np.asarray(xi_plus, dtype=float)
    if check:
        _check_jumps(xi_minus, xi_plus)
    out = np.empty_like(x)
    new_left = np.zeros_like(x[..., 0])
    old_left = np.zeros_like(x[..., 0])
    for i in range(x.shape[-1]):
        new_left = np.maximum(np.maximum(new_left, old_left), x[..., i] - xi_minus[..., i]) + xi_plus[..., i]
        old_left = x[..., i]
        out[..., i] = new_left
    return ParticleState(out) if isinstance(s_prev, ParticleState) else out


def simulate(k: int, n_steps: int, stream: _rng.NoiseStream) -> list[ParticleState]:
    """Single trajectory from the origin, states at times ``0..n_steps``.

    Each step consumes ``k`` left jumps then ``k`` right jumps from ``stream``.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if n_steps < 0:
        raise InvalidInputError("n_steps must be >= 0")
    x = np.zeros(k)
    traj = [ParticleState(x)]
    for _ in range(n_steps):
        xm = stream.exponential(k)
        xp = stream.exponential(k)
        x = step(x, xm, xp, check=False)
        traj.append(ParticleState(x))
    return traj


def _block_noise(seed, block, size, k, n_steps):
    xm = _rng.NoiseStream(seed, _rng.stream_id(_rng.MINUS, block)).exponential((n_steps, size, k))
    xp = _rng.NoiseStream(seed, _rng.stream_id(_rng.PLUS, block)).exponential((n_steps, size, k))
    return xm, xp


def _simulate_block(block, size, k, n_steps, seed, start):
    xm, xp = _block_noise(seed, block, size, k, n_steps)
    traj = np.empty((size, n_steps + 1, k))
    x = np.zeros((size, k)) if start is None else np.broadcast_to(start, (size, k)).astype(float)
    traj[:, 0] = x
    for t in range(n_steps):
        x = full_step(half_step(x, xm[t]), xp[t])
        traj[:, t + 1] = x
    return traj


def simulate_batch(k: int, n_steps: int, n_reps: int, seed: int, *, start=None,
                   jobs: int = 1, block_size: int = DEFAULT_BLOCK) -> np.ndarray:
    """Independent trajectories, array of shape ``(n_reps, n_steps + 1, k)``.

    ``start`` defaults to the origin; any point of the closed chamber may be
    given instead.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if n_steps < 0 or n_reps < 1:
        raise InvalidInputError("need n_steps >= 0 and n_reps >= 1")
    if start is not None:
        start = ParticleState(start).as_array()
        if start.size != k:
            raise InvalidInputError("start has wrong length")
    return map_blocks(_simulate_block, n_reps, k, n_steps, seed, start,
                      jobs=jobs, block_size=block_size)


def wall_walk_step(x, r, xi_minus, xi_plus):
    """``Z(n) = max(Z(n-1) - xi^-, r) + xi^+``: a walk blocked at level ``r``."""
    return np.maximum(np.asarray(x, dtype=float) - xi_minus, r) + xi_plus
