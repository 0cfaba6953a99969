"""Deterministic counter-based Gaussian generator for sketching.

The sketch matrices must be reproducible bit-for-bit from a seed alone, with
no hidden global state, so the generator is a pure function of
``(seed, counter)``:

* word(seed, i) applies the splitmix64 finalizer to ``seed + (i+1)*GOLDEN``
  (all arithmetic mod 2^64), with the standard constants

      GOLDEN = 0x9E3779B97F4A7C15
      MIX1   = 0xBF58476D1CE4E5B9   (xor-shift 30 before, 27 after)
      MIX2   = 0x94D049BB133111EB   (final xor-shift 31)

* uniform(seed, i) keeps the top 53 bits and maps them to the open interval
  (0, 1) as ``(word >> 11 + 0.5) * 2^-53``, so logarithms never see 0.

* normal(seed, i) is Box-Muller on the uniform pair at counters
  ``(2*(i//2), 2*(i//2) + 1)``: the even index of each pair takes the cosine
  branch, the odd index the sine branch. Indexing by pair keeps any chunking
  of a stream bit-identical to a single draw.

The integer stage is exact on every platform; the normal stage inherits the
platform libm's rounding of log/cos/sin, which the golden-value tests pin.
"""

from __future__ import annotations

import numpy as np

__all__ = ["normals", "giid", "NormalStream"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def _words(seed: int, counters: np.ndarray) -> np.ndarray:
    z = (np.uint64(seed & _MASK) + (counters + np.uint64(1)) * _GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    return ((_words(seed, counters) >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normals(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Standard normal draws at stream positions offset .. offset+count-1."""
    if count < 0 or offset < 0:
        raise ValueError("count and offset must be nonnegative")
    if count == 0:
        return np.empty(0)
    idx = np.arange(offset, offset + count, dtype=np.uint64)
    pair = idx >> np.uint64(1)
    u1 = _uniforms(seed, pair * np.uint64(2))
    u2 = _uniforms(seed, pair * np.uint64(2) + np.uint64(1))
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = (2.0 * np.pi) * u2
    out = np.where((idx & np.uint64(1)) == 0, radius * np.cos(angle), radius * np.sin(angle))
    return out


def giid(rows: int, cols: int, seed: int, offset: int = 0) -> np.ndarray:
    """Gaussian iid matrix filled column-major from the seed's normal stream."""
    if rows < 0 or cols < 0:
        raise ValueError("matrix dimensions must be nonnegative")
    flat = normals(seed, rows * cols, offset=offset)
    return np.asfortranarray(flat.reshape((rows, cols), order="F"))


class NormalStream:
    """Sequential view over the counter stream of one seed.

    Consecutive draws consume consecutive counters, so a factorization that
    re-sketches every block sees fresh, reproducible entries without
    coordinating seeds per block.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.position = 0

    def normals(self, count: int) -> np.ndarray:
        out = normals(self.seed, count, offset=self.position)
        self.position += count
        return out

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        out = giid(rows, cols, self.seed, offset=self.position)
        self.position += rows * cols
        return out
