"""Householder reflectors and compact-WY blocks.

A reflector is stored in the normalized form y(0) = 1 so that panels can pack
reflector tails under the diagonal of the array they factor. A block of j
reflectors composes into Q = I - Y T Y^T with T upper triangular (compact WY),
which turns per-column applications into two matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "house_gen",
    "ReflectorBlock",
    "wy_build_T",
    "wy_compose",
    "apply_qt_left",
    "apply_q_left",
    "apply_blocks_qt",
    "apply_blocks_q",
    "blocks_q_columns",
]


def house_gen(a: np.ndarray):
    """Reflector (y, tau, beta) with (I - tau y y^T) a = beta e1 and y(0) = 1.

    The reflection maps onto -sign(a1)*||a||*e1, so y = a - beta*e1 has
    |y(0)| = |a1| + ||a|| and no cancellation. A zero input returns the
    identity reflection (y = e1, tau = 0, beta = 0), which callers read as a
    rank-deficiency signal.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("house_gen expects a nonempty vector")
    nrm = float(np.linalg.norm(a))
    y = np.zeros_like(a)
    y[0] = 1.0
    if nrm == 0.0:
        return y, 0.0, 0.0
    sign = 1.0 if a[0] >= 0.0 else -1.0
    beta = -sign * nrm
    y0 = a[0] - beta
    y[1:] = a[1:] / y0
    tau = 2.0 / (1.0 + float(y[1:] @ y[1:]))
    return y, tau, beta


def wy_build_T(Y: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Accumulate the upper-triangular T of Q = I - Y T Y^T, reflectors in order."""
    j = Y.shape[1]
    T = np.zeros((j, j))
    G = Y.T @ Y
    for c in range(j):
        T[c, c] = tau[c]
        if c:
            T[:c, c] = -tau[c] * (T[:c, :c] @ G[:c, c])
    return T


@dataclass
class ReflectorBlock:
    """Compact-WY block: Q = I - Y T Y^T over ``Y.shape[0]`` rows.

    Reflector c has its unit entry at row ``offset + c`` and zeros above;
    ``offset`` is the global row of the block's first pivot.
    """

    Y: np.ndarray
    tau: np.ndarray
    T: np.ndarray = field(default=None)  # type: ignore[assignment]
    offset: int = 0

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=np.float64)
        self.tau = np.asarray(self.tau, dtype=np.float64)
        if self.Y.ndim != 2 or self.tau.shape != (self.Y.shape[1],):
            raise ValueError("Y must be m x j with one tau per reflector")
        if self.T is None:
            self.T = wy_build_T(self.Y, self.tau)

    @property
    def m(self) -> int:
        return self.Y.shape[0]

    @property
    def width(self) -> int:
        return self.Y.shape[1]


def wy_compose(b1: ReflectorBlock, b2: ReflectorBlock) -> ReflectorBlock:
    """Combine consecutive blocks: Q1 Q2 = I - [Y1 Y2] T [Y1 Y2]^T."""
    if b1.m != b2.m:
        raise ValueError("blocks must act on the same row dimension")
    j1, j2 = b1.width, b2.width
    Y = np.hstack([b1.Y, b2.Y])
    T = np.zeros((j1 + j2, j1 + j2))
    T[:j1, :j1] = b1.T
    T[j1:, j1:] = b2.T
    T[:j1, j1:] = -b1.T @ (b1.Y.T @ b2.Y) @ b2.T
    return ReflectorBlock(Y, np.concatenate([b1.tau, b2.tau]), T, offset=b1.offset)


def apply_qt_left(block: ReflectorBlock, C: np.ndarray) -> np.ndarray:
    """C := Q^T C in place; Q^T = I - Y T^T Y^T."""
    if block.width:
        W = block.Y.T @ C
        C -= block.Y @ (block.T.T @ W)
    return C


def apply_q_left(block: ReflectorBlock, C: np.ndarray) -> np.ndarray:
    """C := Q C in place."""
    if block.width:
        W = block.Y.T @ C
        C -= block.Y @ (block.T @ W)
    return C


def apply_blocks_qt(blocks, C: np.ndarray) -> np.ndarray:
    """C := Q^T C for Q = Q_1 Q_2 ... Q_J (blocks in factorization order)."""
    for blk in blocks:
        apply_qt_left(blk, C)
    return C


def apply_blocks_q(blocks, C: np.ndarray) -> np.ndarray:
    """C := Q C for Q = Q_1 Q_2 ... Q_J."""
    for blk in reversed(blocks):
        apply_q_left(blk, C)
    return C


def blocks_q_columns(blocks, m: int, r: int) -> np.ndarray:
    """Assemble the leading r columns of Q = Q_1 ... Q_J explicitly."""
    Q = np.zeros((m, r), order="F")
    np.fill_diagonal(Q, 1.0)
    return apply_blocks_q(blocks, Q)
