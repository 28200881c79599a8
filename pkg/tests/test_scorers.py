import math

import numpy as np
import pytest

from conftest import make_dataset
from purifier import FittedScorer, ScorerConfig, fit, representation, score, score_batch
from purifier.errors import ConfigError, DimensionError, FitError

KNN1 = ScorerConfig(kind="knn", knn_neighbors=1)
KINDS = [
    ScorerConfig(kind="knn"),
    ScorerConfig(kind="pca", pca_components=2),
    ScorerConfig(kind="mahalanobis"),
]


def test_config_validation():
    with pytest.raises(ConfigError):
        ScorerConfig(kind="forest")
    with pytest.raises(ConfigError):
        ScorerConfig(knn_neighbors=0)
    with pytest.raises(ConfigError):
        ScorerConfig(pca_components=1.5)
    with pytest.raises(ConfigError):
        ScorerConfig(mahalanobis_ridge=-1.0)
    cfg = ScorerConfig(kind="pca", pca_components=3)
    assert ScorerConfig.from_dict(cfg.to_dict()) == cfg


def test_knn_bank_is_input_verbatim(rng):
    X = rng.normal(size=(20, 3))
    m = fit(ScorerConfig(), X)
    assert np.array_equal(m.params["bank"], X)
    assert not m.params["bank"].flags.writeable


def test_knn_hand_computed():
    m = fit(KNN1, [[0.0, 0.0], [2.0, 0.0]])
    assert score(m, [1.0, 1.0]) == math.sqrt(2)
    assert score(m, [2.0, 0.0]) == 0.0
    assert np.array_equal(representation(m, [2.0, 0.0]), [2.0, 0.0])


def test_knn_mean_of_neighbours():
    m = fit(ScorerConfig(knn_neighbors=2), [[0.0], [1.0], [10.0]])
    # neighbours of 0.25 are 0 and 1 at distances 0.25, 0.75
    assert score(m, [0.25]) == 0.5


def test_fit_too_few():
    with pytest.raises(FitError):
        fit(ScorerConfig(knn_neighbors=3), np.zeros((2, 2)))
    with pytest.raises(FitError):
        fit(ScorerConfig(kind="pca"), np.zeros((1, 2)))
    with pytest.raises(FitError):
        fit(ScorerConfig(), np.empty((0, 2)))


def test_pca_line_through_origin():
    direction = np.array([1.0, 2.0, -2.0]) / 3.0
    X = np.outer(np.linspace(-2, 3, 11), direction)
    m = fit(ScorerConfig(kind="pca", pca_components=1), X)
    basis = m.params["basis"][:, 0]
    assert abs(abs(basis @ direction) - 1.0) < 1e-12
    assert np.max(score_batch(m, X)) < 1e-12
    inside = 0.7 * direction
    assert score(m, inside) < 1e-12
    assert np.allclose(representation(m, inside), inside, atol=1e-12)


def test_pca_variance_fraction_and_sign(rng):
    X = rng.normal(size=(400, 4)) * [5.0, 3.0, 0.1, 0.1]
    m = fit(ScorerConfig(kind="pca", pca_components=0.9), X)
    assert m.params["basis"].shape == (4, 2)
    B = m.params["basis"]
    for col in B.T:
        assert col[np.argmax(np.abs(col))] > 0
    assert np.max(np.abs(B.T @ B - np.eye(2))) < 1e-10


def test_pca_components_exceed_dim():
    with pytest.raises(FitError):
        fit(ScorerConfig(kind="pca", pca_components=5), np.random.default_rng(0).normal(size=(10, 3)))


def test_mahalanobis_recovers_identity():
    X = np.random.default_rng(7).normal(size=(10_000, 4))
    m = fit(ScorerConfig(kind="mahalanobis"), X)
    C = X - X.mean(axis=0)
    oracle = C.T @ C / X.shape[0]
    assert np.max(np.abs(m.params["covariance"] - oracle)) < 1e-5
    assert np.max(np.abs(m.params["covariance"] - np.eye(4))) < 0.1
    P = m.params["precision"]
    assert np.array_equal(P, P.T)
    assert np.all(np.linalg.eigvalsh(P) > 0)


def test_mahalanobis_identity_whitening():
    corners = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
    m = fit(ScorerConfig(kind="mahalanobis", mahalanobis_ridge=0.0), corners)
    x = np.array([0.3, -2.0])
    assert np.array_equal(representation(m, x), x)
    assert score(m, x) == pytest.approx(np.linalg.norm(x), abs=0)


def test_mahalanobis_rank_deficient_without_ridge():
    X = np.outer(np.arange(10.0), [1.0, 1.0])
    with pytest.raises(FitError):
        fit(ScorerConfig(kind="mahalanobis", mahalanobis_ridge=0.0), X)
    fit(ScorerConfig(kind="mahalanobis", mahalanobis_ridge=1e-3), X)


@pytest.mark.parametrize("cfg", KINDS, ids=lambda c: c.kind.value)
def test_batch_matches_loop_and_threads(cfg, rng):
    X = rng.normal(size=(50, 3))
    Q = rng.normal(size=(700, 3)) * 2
    m = fit(cfg, X)
    batch = score_batch(m, Q)
    loop = np.array([score(m, q) for q in Q])
    assert np.array_equal(batch, loop)
    assert np.array_equal(batch, score_batch(m, Q, threads=8))
    assert np.all(batch >= 0)
    assert score_batch(m, np.empty((0, 3))).size == 0
    assert isinstance(m, FittedScorer)
    assert np.array_equal(m.score_batch(make_dataset(Q)), batch)


@pytest.mark.parametrize("cfg", KINDS, ids=lambda c: c.kind.value)
def test_dimension_mismatch(cfg, rng):
    m = fit(cfg, rng.normal(size=(10, 3)))
    with pytest.raises(DimensionError):
        score(m, [1.0, 2.0])
    with pytest.raises(DimensionError):
        representation(m, [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(DimensionError):
        score_batch(m, np.zeros((4, 2)))
    assert representation(m, [0.0, 1.0, 2.0]).shape == (3,)


@pytest.mark.parametrize("cfg", KINDS, ids=lambda c: c.kind.value)
def test_fit_is_deterministic(cfg, rng):
    X = rng.normal(size=(30, 3))
    a, b = fit(cfg, X), fit(cfg, X.copy())
    Q = rng.normal(size=(20, 3))
    assert np.array_equal(score_batch(a, Q), score_batch(b, Q))
