"""Deterministic hierarchical random streams.

Every stochastic choice in the benchmark (spike draws, shuffles, prototype
initialization) is pulled from a stream addressed by a seed path such as

    [("digits-hybrid", 0), ("split", 2026), ("model", 23),
     ("encode-train", 0), ("epoch", 4), ("sample", 911)]

so that any run, and any individual sample presentation inside a run, can be
regenerated bit-identically on any platform.  The generator is splitmix64:
the state advances by a fixed odd constant and outputs are a finalizing mix
of the state, which makes block generation (``uniform_block``) exactly
equivalent to repeated single draws and cheap to vectorize with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

# numpy constants for the vectorized block path (wraps silently on arrays)
_NP_GAMMA = np.uint64(GOLDEN_GAMMA)
_NP_M1 = np.uint64(_MIX_MULT_1)
_NP_M2 = np.uint64(_MIX_MULT_2)
_NP_S30 = np.uint64(30)
_NP_S27 = np.uint64(27)
_NP_S31 = np.uint64(31)
_NP_S11 = np.uint64(11)

#: scale turning a 53-bit integer into a float in [0, 1)
_UNIFORM_SCALE = 2.0 ** -53

SeedPath = Sequence[tuple[str, int]]


def hash_label(label: str) -> int:
    """FNV-1a 64-bit hash of a UTF-8 text label."""
    h = FNV_OFFSET_BASIS
    for byte in label.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


def mix64(z: int) -> int:
    """splitmix64 finalizer (scalar, Python ints)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_MULT_1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_MULT_2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer applied elementwise to a uint64 array, in place."""
    z ^= z >> _NP_S30
    z *= _NP_M1
    z ^= z >> _NP_S27
    z *= _NP_M2
    z ^= z >> _NP_S31
    return z


def derive_child_state(parent: int, index: int) -> int:
    """State of the child stream at (parent, index).

    Defined as the splitmix64 finalizer of ``parent XOR (index+1)*gamma``;
    distinct indices give distinct, well-mixed children.
    """
    return mix64(parent ^ (((index + 1) * GOLDEN_GAMMA) & MASK64))


def derive_child_states(parent: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized ``derive_child_state`` for a uint64 index array."""
    z = (indices.astype(np.uint64) + np.uint64(1)) * _NP_GAMMA
    z ^= np.uint64(parent)
    return mix64_array(z)


@dataclass
class Stream:
    """A splitmix64 stream; value type, cheap to copy, safe to pass around."""

    state: int

    def copy(self) -> "Stream":
        return Stream(self.state)

    def child(self, label: str, index: int) -> "Stream":
        """Derived stream at (label, index); does not advance this stream."""
        return Stream(derive_child_state(self.state ^ hash_label(label), index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_uniform(self) -> float:
        """Next float in [0, 1), 53-bit resolution."""
        return (self.next_u64() >> 11) * _UNIFORM_SCALE

    def bernoulli(self, p: float) -> bool:
        """True with probability p; consumes exactly one draw."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli probability out of range: {p!r}")
        return self.next_uniform() < p

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n); consumes one draw."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return int(self.next_uniform() * n)

    def u64_block(self, n: int) -> np.ndarray:
        """n raw outputs as uint64; identical to n ``next_u64`` calls."""
        idx = np.arange(1, n + 1, dtype=np.uint64) * _NP_GAMMA
        idx += np.uint64(self.state)
        out = mix64_array(idx)
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        return out

    def uniform_block(self, n: int) -> np.ndarray:
        """n floats in [0, 1); identical to n ``next_uniform`` calls."""
        return (self.u64_block(n) >> _NP_S11).astype(np.float64) * _UNIFORM_SCALE

    def shuffle(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of 0..n-1 driven by uniform draws."""
        perm = np.arange(n, dtype=np.int64)
        if n < 2:
            return perm
        draws = self.uniform_block(n - 1)
        for k, i in enumerate(range(n - 1, 0, -1)):
            j = int(draws[k] * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def resolve_path(path: SeedPath | Iterable[tuple[str, int]]) -> Stream:
    """Stream addressed by a seed path of (label, index) pairs.

    Pure function of the path contents: each level folds the label hash and
    index into the state via ``derive_child_state``.
    """
    state = 0
    for label, index in path:
        state = derive_child_state(state ^ hash_label(label), index)
    return Stream(state)
