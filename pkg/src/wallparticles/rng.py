"""Counter-based random streams.

Every variate is a pure function of ``(seed, stream_id, counter)``: the
Philox-4x64 bit generator is keyed by ``(seed, stream_id)`` and the counter
indexes 64-bit output words.  Replicate blocks and jump families get their
own ``stream_id`` so that results never depend on how work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

_WORDS_PER_BLOCK = 4  # Philox4x64 emits four words per counter increment
_MASK64 = (1 << 64) - 1

# stream families
MINUS = 1
PLUS = 2
MATRIX = 3
GT = 4
ORTHO = 5
PERM = 6
AUX = 7


def stream_id(family: int, block: int = 0, sub: int = 0) -> int:
    """Pack a jump family, replicate block and sub-index into one 64-bit id."""
    if not (0 <= family < 1 << 16 and 0 <= block < 1 << 32 and 0 <= sub < 1 << 16):
        raise InvalidInputError("stream id component out of range")
    return (family << 48) | (sub << 32) | block


@dataclass
class NoiseStream:
    """A position in a counter-based random stream.

    ``counter`` counts consumed 64-bit words.  Drawing advances it, so two
    streams built with the same triple always produce the same variates.
    """

    seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id", "counter"):
            v = int(getattr(self, name))
            if v < 0 or v > _MASK64:
                raise InvalidInputError(f"{name} must fit in an unsigned 64-bit integer")
            setattr(self, name, v)

    def child(self, family: int, block: int = 0, sub: int = 0) -> "NoiseStream":
        """Independent stream sharing this stream's seed."""
        return NoiseStream(self.seed, stream_id(family, block, sub))

    def raw(self, n: int) -> np.ndarray:
        n = int(n)
        if n < 0:
            raise InvalidInputError("negative draw count")
        blk, off = divmod(self.counter, _WORDS_PER_BLOCK)
        bg = np.random.Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64),
                              counter=blk)
        words = bg.random_raw(off + n)[off:]
        self.counter += n
        return words

    def uniform(self, size) -> np.ndarray:
        """Uniforms on the open interval (0, 1), 53-bit resolution."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape, dtype=np.int64))
        w = self.raw(n)
        return (((w >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53).reshape(shape)

    def exponential(self, size) -> np.ndarray:
        """Unit-mean exponentials by inverse CDF, ``-log(1 - U)``."""
        return -np.log1p(-self.uniform(size))

    def normal(self, size) -> np.ndarray:
        """Standard normals by Box-Muller (both outputs of each pair are used)."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape, dtype=np.int64))
        m = (n + 1) // 2
        u = self.uniform((2, m))
        r = np.sqrt(-2.0 * np.log(u[0]))
        theta = 2.0 * np.pi * u[1]
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]
        return z.reshape(shape)

    def laplace(self, size) -> np.ndarray:
        """Bilateral exponential variates as a difference of two exponentials."""
        e = self.exponential((2,) + ((size,) if np.isscalar(size) else tuple(size)))
        return e[0] - e[1]
