"""Synthetic contaminated datasets.

Normals form one compact isotropic Gaussian at the origin. Anomalies are
drawn from several small Gaussian modes whose centres sit on a shell
well outside the normal cluster, so they are both rare and mutually
distant.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import Dataset, Label, NoiseRatio, Role
from .errors import ConfigError, PurifierError


@dataclass(frozen=True)
class SyntheticConfig:
    n_train: int = 500
    alpha: float = 0.1
    n_test_normal: int = 500
    n_test_anomalous: int = 500
    dim: int = 8
    normal_spread: float = 0.5
    anomaly_modes: int = 8
    anomaly_radius_range: tuple = (3.0, 6.0)
    anomaly_mode_spread: float = 0.3
    seed: int = 0

    def __post_init__(self):
        try:
            NoiseRatio(self.alpha)
        except PurifierError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("n_train", "n_test_normal", "n_test_anomalous", "dim", "anomaly_modes"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}")
        rr = tuple(float(r) for r in self.anomaly_radius_range)
        if len(rr) != 2 or not (0 < rr[0] <= rr[1]):
            raise ConfigError(f"anomaly_radius_range must be 0 < r_min <= r_max, got {rr}")
        object.__setattr__(self, "anomaly_radius_range", rr)
        if not (self.normal_spread > 0 and self.anomaly_mode_spread > 0):
            raise ConfigError("spreads must be positive")
        if not rr[0] > 2 * self.normal_spread:
            raise ConfigError(
                f"r_min={rr[0]} must exceed 2 * normal_spread={2 * self.normal_spread}"
            )
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def n_train_anomalous(self) -> int:
        return NoiseRatio(self.alpha).count(self.n_train)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["anomaly_radius_range"] = list(self.anomaly_radius_range)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SyntheticConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown synthetic fields: {sorted(unknown)}")
        d = dict(d)
        if "anomaly_radius_range" in d:
            d["anomaly_radius_range"] = tuple(d["anomaly_radius_range"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def mode_centers(config: SyntheticConfig) -> np.ndarray:
    """Anomaly mode centres: uniform direction, radius uniform in the range."""
    rng = np.random.default_rng(_streams(config)[0])
    dirs = rng.standard_normal((config.anomaly_modes, config.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    r_min, r_max = config.anomaly_radius_range
    radii = rng.uniform(r_min, r_max, size=config.anomaly_modes)
    return dirs * radii[:, None]


def _streams(config):
    return np.random.SeedSequence(int(config.seed)).spawn(3)


def _draw(rng, centers, n_normal, n_anom, config):
    normals = rng.normal(0.0, config.normal_spread, size=(n_normal, config.dim))
    modes = rng.integers(0, len(centers), size=n_anom)
    anomalies = centers[modes] + rng.normal(0.0, config.anomaly_mode_spread, size=(n_anom, config.dim))
    X = np.vstack([normals, anomalies])
    y = np.r_[np.full(n_normal, Label.NORMAL), np.full(n_anom, Label.ANOMALOUS)]
    order = rng.permutation(X.shape[0])
    return X[order], y[order]


def generate(config: SyntheticConfig) -> tuple[Dataset, Dataset]:
    """Return ``(train, test)``; train and test use independent RNG streams."""
    _, train_ss, test_ss = _streams(config)
    centers = mode_centers(config)
    n_anom = config.n_train_anomalous
    X, y = _draw(np.random.default_rng(train_ss), centers, config.n_train - n_anom, n_anom, config)
    train = Dataset(np.arange(config.n_train), X, y, Role.TRAIN)
    X, y = _draw(
        np.random.default_rng(test_ss), centers, config.n_test_normal, config.n_test_anomalous, config
    )
    test = Dataset(np.arange(X.shape[0]), X, y, Role.TEST)
    return train, test
