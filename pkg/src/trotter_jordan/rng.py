"""Counter-based SplitMix64 stream.

Draw ``i`` of stream ``(seed, stream_id)`` is::

    key  = mix64(seed ^ mix64((stream_id + 1) * GAMMA))
    x_i  = mix64(key + (i + 1) * GAMMA)            (all arithmetic mod 2**64)

with ``mix64`` the SplitMix64 finalizer.  Every value depends only on
``(seed, stream_id, i)``, so trials can run in any order or on any thread.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps mod 2**64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class RngStream:
    def __init__(self, seed: int, stream_id: int = 0):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if stream_id < 0:
            raise ValueError("stream_id must be nonnegative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.position = 0
        self._key = mix64(self.seed ^ mix64((self.stream_id + 1) * GAMMA))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, position={self.position})"

    def uint64(self, count: int) -> np.ndarray:
        """Next ``count`` raw 64-bit draws."""
        idx = np.arange(self.position + 1, self.position + count + 1, dtype=np.uint64)
        self.position += count
        return _mix64_array(np.uint64(self._key) + idx * np.uint64(GAMMA))

    def uniform(self, count: int) -> np.ndarray:
        """Doubles in ``[0, 1)`` from the top 53 bits."""
        return (self.uint64(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def standard_normal(self, count: int) -> np.ndarray:
        """Box-Muller normals; consumes two draws per pair of outputs."""
        pairs = (count + 1) // 2
        bits = self.uint64(2 * pairs) >> np.uint64(11)
        u1 = (bits[0::2].astype(np.float64) + 1.0) * 2.0**-53  # (0, 1]
        u2 = bits[1::2].astype(np.float64) * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:count]

    def complex_normal(self, shape: tuple[int, ...]) -> np.ndarray:
        """Standard complex normals, ``E|z|**2 = 1``."""
        size = int(np.prod(shape))
        z = self.standard_normal(2 * size)
        return ((z[0::2] + 1j * z[1::2]) / np.sqrt(2.0)).reshape(shape)
