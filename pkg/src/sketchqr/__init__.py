"""Randomized rank-revealing QR with sample-based pivoting.

Functional core: qrcp_blas2 / qrcp_blocked reference factorizations,
ssrqrcp / rqrcp / rsrqrcp randomized pivoting, trqrcp truncation, tuxv
low-rank SVD approximation, and the sample-uncertainty posterior.
Estimator wrappers live in sketchqr.estimators.
"""

__version__ = "0.1.0"

from .counters import CommCounters
from .householder import ReflectorBlock, house_gen, wy_compose
from .jacobi import jacobi_svd
from .mmio import read_matrix_market, write_matrix_market
from .pgm import read_pgm, write_pgm
from .quality import emit_cdf_table, run_counters, run_quality
from .randomized import (
    TruncatedFactorization,
    TuxvResult,
    rqrcp,
    rsrqrcp,
    ssrqrcp,
    trqrcp,
    tuxv,
)
from .reference import (
    PivotedFactorization,
    downdate_norms,
    qr_blocked,
    qrcp_blas2,
    qrcp_blocked,
)
from .rng import NormalStream, giid, normals
from .sketch import SketchConfig, sample_build, sample_qrcp, sample_update
from .synth import synth_decay, synth_giid, synth_kahan, synth_matrix
from .uncertainty import (
    expected_norm_sq,
    jl_bound,
    regularized_gamma_q,
    scaling_cdf,
    scaling_pdf,
)

__all__ = [
    "__version__",
    "CommCounters",
    "ReflectorBlock",
    "house_gen",
    "wy_compose",
    "jacobi_svd",
    "read_matrix_market",
    "write_matrix_market",
    "read_pgm",
    "write_pgm",
    "emit_cdf_table",
    "run_counters",
    "run_quality",
    "TruncatedFactorization",
    "TuxvResult",
    "rqrcp",
    "rsrqrcp",
    "ssrqrcp",
    "trqrcp",
    "tuxv",
    "PivotedFactorization",
    "downdate_norms",
    "qr_blocked",
    "qrcp_blas2",
    "qrcp_blocked",
    "NormalStream",
    "giid",
    "normals",
    "SketchConfig",
    "sample_build",
    "sample_qrcp",
    "sample_update",
    "synth_decay",
    "synth_giid",
    "synth_kahan",
    "synth_matrix",
    "expected_norm_sq",
    "jl_bound",
    "regularized_gamma_q",
    "scaling_cdf",
    "scaling_pdf",
    "RandomizedPivotedQR",
    "TruncatedQLP",
]


def __getattr__(name):
    # The estimator wrappers import sklearn, which is slow; load on demand.
    if name in ("RandomizedPivotedQR", "TruncatedQLP"):
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
