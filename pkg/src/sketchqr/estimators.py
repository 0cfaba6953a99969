"""scikit-learn style wrappers around the functional factorization core.

RandomizedPivotedQR fits a rank-revealing pivoted factorization and
transforms by column subset selection, so it drops into sklearn pipelines as
a feature selector. TruncatedQLP mirrors TruncatedSVD's surface on top of
the rank-k UXV' factorization.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_array, check_random_state
from sklearn.utils.validation import check_is_fitted

from .randomized import rqrcp, rsrqrcp, ssrqrcp, trqrcp, tuxv
from .reference import qrcp_blas2, qrcp_blocked

__all__ = ["RandomizedPivotedQR", "TruncatedQLP"]

_PIVOTED = {
    "qrcp": qrcp_blas2,
    "qrcp_blocked": qrcp_blocked,
    "ssrqrcp": ssrqrcp,
    "rqrcp": rqrcp,
    "rsrqrcp": rsrqrcp,
    "trqrcp": trqrcp,
}


def _resolve_seed(random_state) -> int:
    # Integer seeds feed the counter-based generator directly so runs are
    # reproducible across platforms; anything else goes through sklearn's
    # RandomState machinery to draw one.
    if isinstance(random_state, numbers.Integral):
        return int(random_state) & 0xFFFFFFFFFFFFFFFF
    rs = check_random_state(random_state)
    return int(rs.randint(0, 2**63 - 1))


class RandomizedPivotedQR(TransformerMixin, BaseEstimator):
    """Column subset selection via randomized pivoted QR.

    Parameters
    ----------
    rank : int
        Number of columns to select (the factorization truncation rank).
    algorithm : str, default "rqrcp"
        One of "qrcp", "qrcp_blocked", "ssrqrcp", "rqrcp", "rsrqrcp",
        "trqrcp". The qrcp variants ignore random_state.
    block_size : int, default 32
        Panel width for the blocked algorithms.
    padding : int, default 8
        Sample padding rows beyond the block size.
    random_state : int, RandomState or None, default None
        Seed for the sketching generator.

    Attributes
    ----------
    factorization_ : factorization result with R, permutation and counters
    permutation_ : ndarray of shape (n_features,)
    selected_columns_ : ndarray of shape (rank_,)
        First rank_ entries of the permutation, in pivot order.
    r_diagonal_ : ndarray of shape (rank_,)
    rank_ : int
        Achieved rank; lower than the requested rank only for matrices that
        are numerically rank deficient.
    """

    def __init__(self, rank=8, algorithm="rqrcp", block_size=32, padding=8,
                 random_state=None):
        self.rank = rank
        self.algorithm = algorithm
        self.block_size = block_size
        self.padding = padding
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64, order="F")
        if self.algorithm not in _PIVOTED:
            raise ValueError(
                f"algorithm must be one of {sorted(_PIVOTED)}, got {self.algorithm!r}")
        k = int(self.rank)
        if not 1 <= k <= min(X.shape):
            raise ValueError(f"rank must be in [1, min(m, n)], got {k}")
        seed = _resolve_seed(self.random_state)
        if self.algorithm == "qrcp":
            pf = qrcp_blas2(X, k)
        elif self.algorithm == "qrcp_blocked":
            pf = qrcp_blocked(X, k, int(self.block_size))
        elif self.algorithm == "ssrqrcp":
            pf = ssrqrcp(X, k, p=int(self.padding), seed=seed)
        elif self.algorithm == "trqrcp":
            pf = trqrcp(X, k, b=int(self.block_size), p=int(self.padding),
                        seed=seed, allow_large_k=True)
        else:
            pf = _PIVOTED[self.algorithm](X, k, b=int(self.block_size),
                                          p=int(self.padding), seed=seed)
        self.factorization_ = pf
        self.permutation_ = pf.perm.copy()
        self.rank_ = pf.achieved_rank
        self.selected_columns_ = pf.perm[: self.rank_].copy()
        self.r_diagonal_ = pf.r_diag.copy()
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "selected_columns_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X[:, self.selected_columns_]


class TruncatedQLP(TransformerMixin, BaseEstimator):
    """Truncated SVD approximation by flip-flop QLP on a sketched QR.

    Follows the TruncatedSVD surface: components_ holds the right factor,
    transform maps X onto it, inverse_transform maps back.

    Parameters
    ----------
    rank : int
        Truncation rank.
    flip_flops : int, default 1
        Number of alternating QR sweeps; the first sweep already gives a
        rank-revealing middle factor.
    block_size, padding, random_state : see RandomizedPivotedQR.
    refine_sigma : bool, default True
        Re-estimate singular values from the middle factor's SVD instead of
        its diagonal.

    Attributes
    ----------
    components_ : ndarray of shape (rank_, n_features)
    singular_values_ : ndarray of shape (rank_,)
    middle_ : ndarray of shape (rank_, rank_)
        Triangular middle factor X with U @ X @ components_ ~ A.
    """

    def __init__(self, rank=8, flip_flops=1, block_size=32, padding=8,
                 refine_sigma=True, random_state=None):
        self.rank = rank
        self.flip_flops = flip_flops
        self.block_size = block_size
        self.padding = padding
        self.refine_sigma = refine_sigma
        self.random_state = random_state

    def fit(self, X, y=None):
        self.fit_transform(X, y)
        return self

    def fit_transform(self, X, y=None):
        X = check_array(X, dtype=np.float64, order="F")
        k = int(self.rank)
        if not 1 <= k <= min(X.shape):
            raise ValueError(f"rank must be in [1, min(m, n)], got {k}")
        res = tuxv(X, k, b=int(self.block_size), p=int(self.padding),
                   seed=_resolve_seed(self.random_state),
                   j_max=int(self.flip_flops),
                   refine_sigma=bool(self.refine_sigma), allow_large_k=True)
        V = res.v_columns()
        self.result_ = res
        self.rank_ = res.achieved_rank
        self.components_ = np.ascontiguousarray(V.T)
        self.singular_values_ = res.sigma_est.copy()
        self.middle_ = res.X.copy()
        self.n_features_in_ = X.shape[1]
        return X @ V

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.components_.T

    def inverse_transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        return X @ self.components_
