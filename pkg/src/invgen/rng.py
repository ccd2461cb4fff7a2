"""Deterministic 64-bit RNG with index-derived per-trial streams.

Every random draw in this package is a pure function of (seed, stream
index, draw index), so results are identical no matter how work is
split across threads or processes.

Scheme (all arithmetic mod 2**64):

    stream_state(seed, t) = mix64(seed + PHI64 * t)
    draw(state, j)        = mix64(state + PHI64 * (j + 1))
    uniform index in [0, n) = (draw * n) >> 64

mix64 is the splitmix64 finalizer; PHI64 is the usual odd Weyl
increment 2**64 / golden ratio.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
PHI64 = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_state(seed: int, stream: int) -> int:
    """Base state of an indexed substream."""
    return mix64(seed + PHI64 * stream)


def draw64(state: int, j: int) -> int:
    """j-th 64-bit output of the stream with the given base state (j >= 0)."""
    return mix64(state + PHI64 * (j + 1))


def randbelow(state: int, j: int, n: int) -> int:
    """j-th uniform draw in [0, n) by 64-bit fixed point scaling."""
    return (draw64(state, j) * n) >> 64


class Stream:
    """Sequential view of one substream; hands out successive draws."""

    def __init__(self, seed: int, stream: int = 0):
        self.state = stream_state(seed, stream)
        self.j = 0

    def next64(self) -> int:
        u = draw64(self.state, self.j)
        self.j += 1
        return u

    def randbelow(self, n: int) -> int:
        return (self.next64() * n) >> 64

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), k <= n."""
        picked: list[int] = []
        seen = set()
        while len(picked) < k:
            i = self.randbelow(n)
            if i not in seen:
                seen.add(i)
                picked.append(i)
        return picked


# vectorized counterparts (numpy uint64, silent wraparound is intended)

_NP_PHI = np.uint64(PHI64)
_NP_M1 = np.uint64(_M1)
_NP_M2 = np.uint64(_M2)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _NP_M1
    z = (z ^ (z >> np.uint64(27))) * _NP_M2
    return z ^ (z >> np.uint64(31))


def stream_states_vec(seed: int, streams: np.ndarray) -> np.ndarray:
    return mix64_vec(np.uint64(seed & MASK64) + _NP_PHI * streams.astype(np.uint64))


def draws_vec(states: np.ndarray, j: int) -> np.ndarray:
    # the Weyl step is reduced in Python first: numpy warns on scalar overflow
    return mix64_vec(states + np.uint64((PHI64 * (j + 1)) & MASK64))


def randbelow_vec(u: np.ndarray, n: int) -> np.ndarray:
    """(u * n) >> 64 done in uint64 pieces; n must fit in 31 bits."""
    hi = u >> np.uint64(32)
    lo = u & np.uint64(0xFFFFFFFF)
    nn = np.uint64(n)
    return (hi * nn + ((lo * nn) >> np.uint64(32))) >> np.uint64(32)
