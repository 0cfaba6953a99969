"""Low-rank approximation quality and communication-counter experiments.

Every experiment is described by an ExperimentSpec and emits CSV whose header
comments record the full spec (parameters, seed, code version), so any output
file can be regenerated exactly.

Quality runs sweep the rank grid {b, 2b, ...} and report min / median / max
relative Frobenius error over the repetitions, with derived seeds seed+i per
repetition. Medians use the lower median for even counts. The "qr" rows are
the labeled presorted variant (columns sorted by descending 2-norm before the
unpivoted factorization); a plain unpivoted QR is not competitive and would
say nothing about pivot quality.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .jacobi import jacobi_svd
from .randomized import rqrcp, rsrqrcp, ssrqrcp, trqrcp, tuxv
from .reference import PivotedFactorization, qr_blocked, qrcp_blas2, qrcp_blocked

__all__ = [
    "ALGORITHMS",
    "DETERMINISTIC_ALGORITHMS",
    "ExperimentSpec",
    "QualityRecord",
    "lower_median",
    "rank_grid",
    "presort_columns",
    "make_factorization",
    "run_quality",
    "run_counters",
    "emit_cdf_table",
    "write_csv",
]

ALGORITHMS = ("qrcp2", "qrcp3", "qr", "ssrqrcp", "rqrcp", "rsrqrcp", "trqrcp", "tuxv", "svd")
DETERMINISTIC_ALGORITHMS = frozenset({"qrcp2", "qrcp3", "qr", "svd"})


@dataclass
class ExperimentSpec:
    """Everything needed to regenerate one experiment's output."""

    algorithm: str
    source: str
    m: int
    n: int
    rank: int
    block: int = 32
    pad: int = 8
    seed: int = 0
    reps: int = 100

    def comment_lines(self) -> list[str]:
        return [
            f"sketchqr {__version__}",
            f"algorithm={self.algorithm} source={self.source}",
            f"m={self.m} n={self.n} rank={self.rank} block={self.block} pad={self.pad}",
            f"seed={self.seed:#x} reps={self.reps}",
        ]


@dataclass
class QualityRecord:
    algorithm: str
    rank: int
    reps: int
    err_min: float
    err_median: float
    err_max: float


def lower_median(values) -> float:
    s = sorted(values)
    if not s:
        raise ValueError("median of empty sequence")
    return s[(len(s) - 1) // 2]


def rank_grid(k: int, b: int) -> list[int]:
    grid = list(range(b, k + 1, b))
    return grid or [k]


def presort_columns(A: np.ndarray):
    """Columns in descending 2-norm order (stable) and the applied order."""
    order = np.argsort(-np.linalg.norm(A, axis=0), kind="stable").astype(np.int64)
    return np.asfortranarray(A[:, order]), order


def make_factorization(A, algorithm, k, b, p, seed, presort_qr: bool = False):
    if algorithm == "qrcp2":
        return qrcp_blas2(A, k)
    if algorithm == "qrcp3":
        return qrcp_blocked(A, k, b)
    if algorithm == "qr":
        if presort_qr:
            As, order = presort_columns(A)
            pf = qr_blocked(As, k, b)
            pf.perm = order
            return pf
        return qr_blocked(A, k, b)
    if algorithm == "ssrqrcp":
        return ssrqrcp(A, k, p=p, seed=seed)
    if algorithm == "rqrcp":
        return rqrcp(A, k, b=b, p=p, seed=seed)
    if algorithm == "rsrqrcp":
        return rsrqrcp(A, k, b=b, p=p, seed=seed)
    if algorithm == "trqrcp":
        return trqrcp(A, k, b=b, p=p, seed=seed, allow_large_k=True)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_quality(A, algorithm: str, rank: int, block: int = 32, pad: int = 8,
                seed: int = 0, reps: int = 100) -> list[QualityRecord]:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    A = np.asfortranarray(A, dtype=np.float64)
    fro = float(np.linalg.norm(A))
    if fro == 0.0:
        raise ValueError("quality of an all-zero matrix is not meaningful")
    ranks = rank_grid(rank, block)
    reps_eff = 1 if algorithm in DETERMINISTIC_ALGORITHMS else max(1, reps)
    errs: dict[int, list[float]] = {r: [] for r in ranks}

    if algorithm == "svd":
        U, s, V = jacobi_svd(A)
        for r in ranks:
            approx = (U[:, :r] * s[:r]) @ V[:, :r].T
            errs[r].append(float(np.linalg.norm(A - approx) / fro))
    elif algorithm == "tuxv":
        for rep in range(reps_eff):
            for r in ranks:
                res = tuxv(A, r, b=block, p=pad, seed=seed + rep, allow_large_k=True)
                errs[r].append(float(np.linalg.norm(A - res.reconstruct()) / fro))
    else:
        for rep in range(reps_eff):
            pf = make_factorization(A, algorithm, rank, block, pad, seed + rep, presort_qr=True)
            for r in ranks:
                errs[r].append(pf.rel_residual(A, r))

    return [
        QualityRecord(algorithm, r, reps_eff, min(errs[r]), lower_median(errs[r]), max(errs[r]))
        for r in ranks
    ]


def run_counters(A, algorithm: str, rank: int, block: int = 32, pad: int = 8,
                 seed: int = 0) -> dict:
    """Communication counters of one factorization run."""
    if algorithm == "svd":
        raise ValueError("counters are tracked for the QR-family algorithms only")
    if algorithm == "tuxv":
        result = tuxv(A, rank, b=block, p=pad, seed=seed, allow_large_k=True)
        counters, achieved = result.counters, result.achieved_rank
    else:
        pf = make_factorization(A, algorithm, rank, block, pad, seed)
        counters, achieved = pf.counters, pf.achieved_rank
    m, n = A.shape
    return {
        "algorithm": algorithm,
        "m": m,
        "n": n,
        "rank": rank,
        "achieved_rank": achieved,
        "block": block,
        "pad": pad,
        "seed": seed,
        "trailing_passes": counters.trailing_passes,
        "blas2_volume": counters.blas2_volume,
        "blas3_volume": counters.blas3_volume,
    }


def emit_cdf_table(ells, taus):
    """Rows of P(phi < tau) for each sample-row count l and threshold tau."""
    from .uncertainty import scaling_cdf

    columns = ["ell"] + [f"tau_{_fmt(t)}" for t in taus]
    rows = [[int(l)] + [scaling_cdf(int(l), float(t)) for t in taus] for l in ells]
    return columns, rows


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, comment_lines, columns, rows) -> None:
    """CSV with '#'-prefixed spec comments above the header row.

    path None or "-" writes to stdout.
    """
    lines = [f"# {c}" for c in comment_lines]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
