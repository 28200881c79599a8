"""Lightweight anomaly scorers usable as sub-models and as the final detector.

Three kinds share one interface:

* ``knn``: memory bank of the fitted vectors; score is the mean Euclidean
  distance to the ``knn_neighbors`` nearest bank vectors.
* ``pca``: mean plus an orthonormal principal basis; score is the norm of
  the reconstruction residual.
* ``mahalanobis``: Gaussian maximum-likelihood mean and ridge-regularized
  covariance; score is the Mahalanobis distance to the mean.

Scoring is computed query-by-query on fixed-size chunks, so a batch gives
bit-identical results whether it runs serially or on a thread pool.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._parallel import ordered_map
from .core import Dataset, Sample
from .errors import ConfigError, DimensionError, FitError

_CHUNK = 256


class ScorerKind(str, enum.Enum):
    KNN = "knn"
    PCA = "pca"
    MAHALANOBIS = "mahalanobis"


@dataclass(frozen=True)
class ScorerConfig:
    kind: ScorerKind = ScorerKind.KNN
    knn_neighbors: int = 3
    # int -> fixed number of components; float in (0, 1] -> explained-variance fraction
    pca_components: Union[int, float] = 0.90
    mahalanobis_ridge: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ScorerKind(self.kind))
        except ValueError:
            raise ConfigError(f"unknown scorer kind {self.kind!r}") from None
        if isinstance(self.knn_neighbors, bool) or int(self.knn_neighbors) != self.knn_neighbors or self.knn_neighbors < 1:
            raise ConfigError(f"knn_neighbors must be a positive integer, got {self.knn_neighbors}")
        object.__setattr__(self, "knn_neighbors", int(self.knn_neighbors))
        c = self.pca_components
        if isinstance(c, bool):
            raise ConfigError("pca_components must be a number")
        if isinstance(c, (int, np.integer)):
            if c < 1:
                raise ConfigError(f"pca_components must be >= 1, got {c}")
            object.__setattr__(self, "pca_components", int(c))
        elif not (0.0 < float(c) <= 1.0):
            raise ConfigError(f"pca variance fraction must lie in (0, 1], got {c}")
        if not (self.mahalanobis_ridge >= 0.0):
            raise ConfigError(f"mahalanobis_ridge must be >= 0, got {self.mahalanobis_ridge}")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "knn_neighbors": self.knn_neighbors,
            "pca_components": self.pca_components,
            "mahalanobis_ridge": self.mahalanobis_ridge,
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScorerConfig":
        unknown = set(d) - {"kind", "knn_neighbors", "pca_components", "mahalanobis_ridge", "seed"}
        if unknown:
            raise ConfigError(f"unknown scorer fields: {sorted(unknown)}")
        return cls(**d)


def _readonly(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FittedScorer:
    """A trained scorer. ``params`` holds read-only arrays:

    knn: ``bank``; pca: ``mean``, ``basis`` (d, r), ``explained``;
    mahalanobis: ``mean``, ``covariance``, ``precision``, ``whitener``.
    """

    config: ScorerConfig
    params: dict = field(repr=False)
    dim: int
    n_fitted: int
    train_subset_index: int | None = None

    def score(self, x) -> float:
        return score(self, x)

    def score_batch(self, queries, threads: int | None = 1) -> np.ndarray:
        return score_batch(self, queries, threads=threads)

    def representation(self, x) -> np.ndarray:
        return representation(self, x)


def _features(samples) -> np.ndarray:
    if isinstance(samples, Dataset):
        return samples.features
    if isinstance(samples, np.ndarray):
        X = samples
    else:
        samples = list(samples)
        if not samples:
            return np.empty((0, 0))
        X = np.stack(
            [s.features if isinstance(s, Sample) else np.asarray(s, dtype=np.float64) for s in samples]
        )
    X = np.asarray(X, dtype=np.float64)
    return X.reshape(1, -1) if X.ndim == 1 else X


def _sorted_eigh(cov: np.ndarray):
    """Eigenpairs in descending order, each vector's largest-|entry| made positive."""
    w, V = np.linalg.eigh(cov)
    w, V = w[::-1], V[:, ::-1]
    pivot = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivot, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return w, V * signs


def fit(config: ScorerConfig, samples, train_subset_index: int | None = None) -> FittedScorer:
    """Fit a scorer on ``samples`` (a Dataset, Samples, or an (n, d) array).

    Only feature vectors are read; labels never influence the fit.
    """
    X = _features(samples)
    n = X.shape[0]
    if n == 0:
        raise FitError("cannot fit a scorer on zero samples")
    if not np.all(np.isfinite(X)):
        raise FitError("training features contain non-finite values")
    d = X.shape[1]
    kind = config.kind

    if kind is ScorerKind.KNN:
        if n < config.knn_neighbors:
            raise FitError(f"knn needs >= {config.knn_neighbors} samples, got {n}")
        params = {"bank": _readonly(X)}

    elif kind is ScorerKind.PCA:
        if n < 2:
            raise FitError(f"pca needs >= 2 samples, got {n}")
        mean = X.mean(axis=0)
        C = X - mean
        w, V = _sorted_eigh(C.T @ C / n)
        w = np.clip(w, 0.0, None)
        comp = config.pca_components
        if isinstance(comp, int):
            if comp > d:
                raise FitError(f"pca_components={comp} exceeds dimension {d}")
            r = comp
        else:
            total = w.sum()
            if total <= 0.0:
                r = 1
            else:
                ratio = np.cumsum(w) / total
                r = int(np.searchsorted(ratio, comp - 1e-12) + 1)
                r = min(max(r, 1), d)
        params = {"mean": _readonly(mean), "basis": _readonly(V[:, :r]), "explained": _readonly(w[:r])}

    elif kind is ScorerKind.MAHALANOBIS:
        mean = X.mean(axis=0)
        C = X - mean
        cov = C.T @ C / n
        cov = (cov + cov.T) / 2 + config.mahalanobis_ridge * np.eye(d)
        w, V = _sorted_eigh(cov)
        if w[-1] <= w[0] * d * np.finfo(float).eps:
            raise FitError(
                "covariance is rank-deficient; use a positive mahalanobis_ridge"
            )
        whitener = (V / np.sqrt(w)) @ V.T
        precision = (V / w) @ V.T
        params = {
            "mean": _readonly(mean),
            "covariance": _readonly(cov),
            "precision": _readonly((precision + precision.T) / 2),
            "whitener": _readonly((whitener + whitener.T) / 2),
        }
    else:  # pragma: no cover
        raise ConfigError(f"unsupported kind {kind}")

    return FittedScorer(config=config, params=params, dim=d, n_fitted=n, train_subset_index=train_subset_index)


def _check_dim(fitted: FittedScorer, Q: np.ndarray):
    if Q.ndim != 2 or Q.shape[1] != fitted.dim:
        raise DimensionError(f"expected dimension {fitted.dim}, got {Q.shape[-1] if Q.ndim else 0}")


# Row-wise arithmetic below accumulates coordinate by coordinate instead of
# calling BLAS, whose results depend on the batch shape.
def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = A[:, :1] * B[0]
    for c in range(1, A.shape[1]):
        out += A[:, c : c + 1] * B[c]
    return out


def _row_norms(A: np.ndarray) -> np.ndarray:
    acc = np.square(A[:, 0])
    for c in range(1, A.shape[1]):
        acc += np.square(A[:, c])
    return np.sqrt(acc)


def _knn_dists(bank: np.ndarray, Q: np.ndarray) -> np.ndarray:
    acc = np.square(Q[:, None, 0] - bank[None, :, 0])
    for c in range(1, Q.shape[1]):
        acc += np.square(Q[:, None, c] - bank[None, :, c])
    return np.sqrt(acc)


def _score_chunk(fitted: FittedScorer, Q: np.ndarray) -> np.ndarray:
    p = fitted.params
    kind = fitted.config.kind
    if kind is ScorerKind.KNN:
        m = fitted.config.knn_neighbors
        D = _knn_dists(p["bank"], Q)
        if m < D.shape[1]:
            D = np.partition(D, m - 1, axis=1)[:, :m]
        D = np.sort(D, axis=1)
        acc = D[:, 0].copy()
        for c in range(1, m):
            acc += D[:, c]
        return acc / m
    if kind is ScorerKind.PCA:
        C = Q - p["mean"]
        B = p["basis"]
        return _row_norms(C - _matmul(_matmul(C, B), B.T))
    return _row_norms(_matmul(Q - p["mean"], p["whitener"]))


def score_batch(fitted: FittedScorer, queries, threads: int | None = 1) -> np.ndarray:
    """Scores for every query row, in order. Higher means more anomalous."""
    Q = _features(queries)
    if Q.shape[0] == 0:
        return np.empty(0)
    _check_dim(fitted, Q)
    starts = range(0, Q.shape[0], _CHUNK)
    parts = ordered_map(lambda s: _score_chunk(fitted, Q[s : s + _CHUNK]), starts, threads)
    return np.concatenate(parts)


def score(fitted: FittedScorer, x) -> float:
    Q = _features([x])
    _check_dim(fitted, Q)
    return float(_score_chunk(fitted, Q)[0])


def representation(fitted: FittedScorer, x) -> np.ndarray:
    """Feature representation of ``x`` under ``fitted`` (always length d).

    knn: nearest bank vector (lowest bank index on ties); pca: reconstruction
    in ambient space; mahalanobis: whitened offset from the mean.
    """
    Q = _features([x])
    _check_dim(fitted, Q)
    q = Q[0]
    p = fitted.params
    kind = fitted.config.kind
    if kind is ScorerKind.KNN:
        bank = p["bank"]
        return bank[int(np.argmin(_knn_dists(bank, Q)[0]))].copy()
    if kind is ScorerKind.PCA:
        B = p["basis"]
        return p["mean"] + _matmul(_matmul(Q - p["mean"], B), B.T)[0]
    return _matmul(Q - p["mean"], p["whitener"])[0]
