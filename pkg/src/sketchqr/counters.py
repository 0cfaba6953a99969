"""Communication counters attached to every factorization result.

The model charges work against the not-yet-factorized (trailing) block, the
part of the matrix assumed to live in slow memory:

* ``trailing_passes``: full sweeps over the trailing block while pivoting --
  one per BLAS-2 iteration that touches it, one per trailing GEMM sweep of a
  block reflection, and one per mid-loop resampling product. One-time setup
  (initial column norms, the initial sketch) is not a pivoting sweep and is
  excluded, so the classic per-column algorithm counts exactly k.
* ``blas2_volume``: element traffic of vector-level trailing updates.
* ``blas3_volume``: p*r*q multiply volume per trailing GEMM, including sketch
  products.

Work on the sketch itself (pivoted QR of B, the sample update solve) is
fast-memory arithmetic on an l x n strip and contributes to no counter.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["CommCounters"]


@dataclass
class CommCounters:
    trailing_passes: int = 0
    blas2_volume: int = 0
    blas3_volume: int = 0

    def add_pass(self, count: int = 1) -> None:
        self.trailing_passes += count

    def add_blas2(self, elements: int) -> None:
        self.blas2_volume += int(elements)

    def add_blas3(self, p: int, r: int, q: int) -> None:
        self.blas3_volume += int(p) * int(r) * int(q)

    def merge(self, other: "CommCounters") -> None:
        self.trailing_passes += other.trailing_passes
        self.blas2_volume += other.blas2_volume
        self.blas3_volume += other.blas3_volume
