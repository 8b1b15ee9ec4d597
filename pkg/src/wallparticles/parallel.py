"""Replicate-block parallel map.

Replicates are cut into fixed-size blocks; block ``b`` always uses the same
random streams whatever the worker count, so ``jobs`` only changes speed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

DEFAULT_BLOCK = 8192


def blocks(n_reps: int, block_size: int = DEFAULT_BLOCK):
    """Yield ``(block_index, size)`` pairs covering ``n_reps`` replicates."""
    b = 0
    start = 0
    while start < n_reps:
        size = min(block_size, n_reps - start)
        yield b, size
        b += 1
        start += size


def map_blocks(fn, n_reps: int, *args, jobs: int = 1, block_size: int = DEFAULT_BLOCK):
    """Call ``fn(block_index, size, *args)`` for every block and concatenate.

    ``fn`` must return an array (or tuple of arrays) whose first axis has
    length ``size``.  Results are merged in block order.
    """
    work = list(blocks(n_reps, block_size))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(fn, b, size, *args) for b, size in work]
            parts = [f.result() for f in futs]
    else:
        parts = [fn(b, size, *args) for b, size in work]
    if not parts:
        raise ValueError("no replicates requested")
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p, axis=0) for p in zip(*parts))
    return np.concatenate(parts, axis=0)
