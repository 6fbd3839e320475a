"""Bit-sequence helpers.

Bit sequences are numpy uint8 arrays with values in {0, 1} throughout the
package; "0011"-style strings are accepted at the boundaries.
"""

import numpy as np


def as_bits(value) -> np.ndarray:
    """Coerce a bit string, iterable, or array to a uint8 0/1 array."""
    if isinstance(value, str):
        arr = np.frombuffer(value.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(value).reshape(-1)
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit sequence may only contain 0 and 1")
    return arr.astype(np.uint8)


def random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    """n independent uniform bits."""
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def flip(bits) -> np.ndarray:
    """Bitwise complement."""
    return np.bitwise_xor(as_bits(bits), 1)


def to01(bits) -> str:
    """Render as a compact '0101' string."""
    return "".join("1" if b else "0" for b in as_bits(bits))
