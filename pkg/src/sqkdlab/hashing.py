"""Keyed Toeplitz universal hashing over GF(2) and privacy amplification.

A hash key of ``in_len + out_len - 1`` bits defines the ``out_len x in_len``
binary Toeplitz matrix ``T[i, j] = key_bits[out_len - 1 + j - i]`` (constant
along diagonals: reading the first column downward gives key bits
``out_len-1 .. 0``, reading the first row rightward gives key bits
``out_len-1 .. in_len+out_len-2``).  The keyed map ``x -> T·x xor mask`` is a
strongly universal family: any two distinct inputs collide with probability
at most ``2**-out_len`` over a uniform key.

The same construction doubles as the privacy-amplification compressor
(mask zero, matrix bits expanded from a public seed).
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from .bits import as_bits

MIN_HASH_KEY_BITS = 128


@dataclass(frozen=True)
class ToeplitzSpec:
    """One fully expanded keyed hash: matrix key bits plus an XOR mask."""

    key_bits: np.ndarray
    mask_bits: np.ndarray
    in_len: int
    out_len: int

    def __post_init__(self):
        object.__setattr__(self, "key_bits", as_bits(self.key_bits))
        object.__setattr__(self, "mask_bits", as_bits(self.mask_bits))
        if self.in_len < 0 or self.out_len < 1:
            raise ValueError("need in_len >= 0 and out_len >= 1")
        if len(self.key_bits) != self.in_len + self.out_len - 1:
            raise ValueError(
                f"key must be in_len + out_len - 1 = {self.in_len + self.out_len - 1} bits, "
                f"got {len(self.key_bits)}"
            )
        if len(self.mask_bits) != self.out_len:
            raise ValueError(f"mask must be out_len = {self.out_len} bits, got {len(self.mask_bits)}")


def toeplitz_matrix(spec: ToeplitzSpec) -> np.ndarray:
    """Materialize the out_len x in_len matrix (row i, column j = key[out_len-1+j-i])."""
    rows = np.arange(spec.out_len)[:, None]
    cols = np.arange(spec.in_len)[None, :]
    return spec.key_bits[spec.out_len - 1 + cols - rows]


def toeplitz_hash(spec: ToeplitzSpec, x) -> np.ndarray:
    """T·x xor mask over GF(2); input length must equal spec.in_len."""
    x = as_bits(x)
    if len(x) != spec.in_len:
        raise ValueError(f"input is {len(x)} bits, spec expects {spec.in_len}")
    t = toeplitz_matrix(spec).astype(np.int64)
    linear = (t @ x.astype(np.int64)) & 1
    return linear.astype(np.uint8) ^ spec.mask_bits


def expand_key_bits(seed_bits, count: int) -> np.ndarray:
    """Deterministic counter-mode expansion of a bit seed into ``count`` bits.

    Block i is SHA-256(seed_len || packed seed || i); blocks are concatenated
    and truncated.  Same seed, same stream; no other guarantees intended.
    """
    seed = as_bits(seed_bits)
    if len(seed) == 0:
        raise ValueError("cannot expand an empty seed")
    if count < 0:
        raise ValueError("count must be >= 0")
    prefix = len(seed).to_bytes(8, "big") + np.packbits(seed).tobytes()
    blocks = [
        hashlib.sha256(prefix + counter.to_bytes(8, "big")).digest()
        for counter in range((count + 255) // 256)
    ]
    stream = np.unpackbits(np.frombuffer(b"".join(blocks), dtype=np.uint8))
    return stream[:count].astype(np.uint8)


def derive_hash_spec(hash_key, in_len: int, out_len: int) -> ToeplitzSpec:
    """Expand a pre-shared hash key into a concrete ToeplitzSpec.

    The first in_len+out_len-1 stream bits become the matrix key, the next
    out_len bits the mask.  Deterministic in (hash_key, in_len, out_len).
    """
    hk = as_bits(hash_key)
    if len(hk) < MIN_HASH_KEY_BITS:
        raise ValueError(f"hash key must be at least {MIN_HASH_KEY_BITS} bits, got {len(hk)}")
    if in_len < 0 or out_len < 1:
        raise ValueError("need in_len >= 0 and out_len >= 1")
    stream = expand_key_bits(hk, in_len + 2 * out_len - 1)
    split = in_len + out_len - 1
    return ToeplitzSpec(stream[:split], stream[split:], in_len, out_len)


def privacy_amplify(raw, pa_seed, out_len: int) -> np.ndarray:
    """Compress a raw key to out_len bits with a seed-expanded Toeplitz map.

    No mask: equal raw keys under the same public seed give equal outputs.
    Requires 1 <= out_len <= len(raw).
    """
    raw = as_bits(raw)
    if len(raw) < 1:
        raise ValueError("raw key is empty")
    if not 1 <= out_len <= len(raw):
        raise ValueError(f"out_len must be in 1..{len(raw)}, got {out_len}")
    key = expand_key_bits(as_bits(pa_seed), len(raw) + out_len - 1)
    spec = ToeplitzSpec(key, np.zeros(out_len, dtype=np.uint8), len(raw), out_len)
    return toeplitz_hash(spec, raw)
