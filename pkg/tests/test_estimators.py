"""sklearn wrapper behavior: attributes, pipelines, validation."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from conftest import decay_matrix
from sketchqr.estimators import RandomizedPivotedQR, TruncatedQLP
from sketchqr.jacobi import jacobi_svd


@pytest.fixture
def X():
    return decay_matrix(60, 40, ratio=0.8, seed=1)


def test_fit_attributes(X):
    est = RandomizedPivotedQR(rank=10, random_state=7).fit(X)
    assert est.rank_ == 10
    assert est.n_features_in_ == 40
    assert est.selected_columns_.shape == (10,)
    assert sorted(est.permutation_.tolist()) == list(range(40))
    assert est.r_diagonal_.shape == (10,)
    assert np.all(est.r_diagonal_ > 0)


def test_transform_selects_columns(X):
    est = RandomizedPivotedQR(rank=6, random_state=3).fit(X)
    Xt = est.transform(X)
    np.testing.assert_array_equal(Xt, X[:, est.selected_columns_])


def test_deterministic_with_int_seed(X):
    a = RandomizedPivotedQR(rank=8, random_state=42).fit(X)
    b = RandomizedPivotedQR(rank=8, random_state=42).fit(X)
    np.testing.assert_array_equal(a.selected_columns_, b.selected_columns_)


def test_qrcp_algorithms_ignore_seed(X):
    a = RandomizedPivotedQR(rank=8, algorithm="qrcp", random_state=1).fit(X)
    b = RandomizedPivotedQR(rank=8, algorithm="qrcp", random_state=2).fit(X)
    np.testing.assert_array_equal(a.selected_columns_, b.selected_columns_)


def test_all_algorithms_run(X):
    for algo in ("qrcp", "qrcp_blocked", "ssrqrcp", "rqrcp", "rsrqrcp", "trqrcp"):
        est = RandomizedPivotedQR(rank=5, algorithm=algo, block_size=4,
                                  padding=4, random_state=0).fit(X)
        assert est.transform(X).shape == (60, 5)


def test_not_fitted_raises(X):
    with pytest.raises(NotFittedError):
        RandomizedPivotedQR(rank=3).transform(X)


def test_bad_params_raise(X):
    with pytest.raises(ValueError):
        RandomizedPivotedQR(rank=0).fit(X)
    with pytest.raises(ValueError):
        RandomizedPivotedQR(rank=41).fit(X)
    with pytest.raises(ValueError):
        RandomizedPivotedQR(rank=3, algorithm="cholesky").fit(X)


def test_feature_count_checked(X):
    est = RandomizedPivotedQR(rank=4, random_state=0).fit(X)
    with pytest.raises(ValueError):
        est.transform(X[:, :20])


def test_clone_and_get_params(X):
    est = RandomizedPivotedQR(rank=9, algorithm="trqrcp", block_size=4,
                              padding=2, random_state=5)
    dup = clone(est)
    assert dup.get_params() == est.get_params()
    np.testing.assert_array_equal(dup.fit(X).selected_columns_,
                                  est.fit(X).selected_columns_)


def test_pipeline_compatible(X):
    from sklearn.linear_model import Ridge

    y = X @ np.arange(40.0)
    pipe = make_pipeline(RandomizedPivotedQR(rank=12, random_state=1), Ridge())
    pipe.fit(X, y)
    assert pipe.predict(X).shape == (60,)


def test_qlp_surface(X):
    qlp = TruncatedQLP(rank=10, random_state=2)
    Z = qlp.fit_transform(X)
    assert Z.shape == (60, 10)
    assert qlp.components_.shape == (10, 40)
    assert qlp.singular_values_.shape == (10,)
    np.testing.assert_allclose(Z, qlp.transform(X))
    back = qlp.inverse_transform(Z)
    assert back.shape == X.shape
    # rank-10 truncation of a ratio-0.8 spectrum: residual is sigma tail sized
    rel = np.linalg.norm(X - back) / np.linalg.norm(X)
    assert rel < 0.2


def test_qlp_sigma_close_to_svd(X):
    qlp = TruncatedQLP(rank=8, refine_sigma=True, random_state=4).fit(X)
    _, s, _ = jacobi_svd(X)
    np.testing.assert_allclose(qlp.singular_values_, s[:8], rtol=0.1)


def test_qlp_components_orthonormal(X):
    qlp = TruncatedQLP(rank=7, random_state=6).fit(X)
    np.testing.assert_allclose(qlp.components_ @ qlp.components_.T, np.eye(7),
                               atol=1e-12)


def test_qlp_fit_then_transform_matches_fit_transform(X):
    a = TruncatedQLP(rank=5, random_state=8).fit_transform(X)
    est = TruncatedQLP(rank=5, random_state=8).fit(X)
    np.testing.assert_allclose(a, est.transform(X), atol=1e-12)
