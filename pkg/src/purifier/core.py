"""Domain types, seeded partitioning and quantile selection."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlignmentError,
    EmptyInput,
    InvalidPartition,
    InvalidQuantile,
    PurifierError,
)

_MASK64 = (1 << 64) - 1


class Label(enum.IntEnum):
    NORMAL = 0
    ANOMALOUS = 1
    UNKNOWN = -1


class Role(str, enum.Enum):
    TRAIN = "train"
    TEST = "test"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Sample:
    id: int
    features: np.ndarray
    label: Label = Label.UNKNOWN

    def __post_init__(self):
        if self.id < 0:
            raise PurifierError(f"sample id must be non-negative, got {self.id}")
        x = np.array(self.features, dtype=np.float64).reshape(-1)
        if x.size == 0:
            raise PurifierError("sample features must be non-empty")
        if not np.all(np.isfinite(x)):
            raise PurifierError(f"sample {self.id} has non-finite features")
        object.__setattr__(self, "features", _frozen(x))
        object.__setattr__(self, "label", Label(self.label))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature vectors with ids and (evaluation-only) ground-truth labels.

    Stored column-wise: ``ids`` (N,), ``features`` (N, d), ``labels`` (N,).
    Nothing in the screening or fitting path ever reads ``labels``.
    """

    ids: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    role: Role = Role.TRAIN

    def __post_init__(self):
        ids = np.array(self.ids, dtype=np.int64).reshape(-1)
        X = np.array(self.features, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(ids.size, -1)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if ids.size < 1:
            raise EmptyInput("a dataset needs at least one sample")
        if X.ndim != 2 or X.shape[0] != ids.size or labels.size != ids.size:
            raise AlignmentError(
                f"ids {ids.shape}, features {X.shape} and labels {labels.shape} disagree"
            )
        if X.shape[1] < 1:
            raise PurifierError("feature dimension must be >= 1")
        if not np.all(np.isfinite(X)):
            raise PurifierError("features contain NaN or infinite values")
        if np.any(ids < 0) or np.any(np.diff(ids) <= 0):
            raise PurifierError("sample ids must be non-negative, unique and ascending")
        if not np.all(np.isin(labels, [int(v) for v in Label])):
            raise PurifierError("labels must be one of 0, 1, -1")
        object.__setattr__(self, "ids", _frozen(ids))
        object.__setattr__(self, "features", _frozen(np.ascontiguousarray(X)))
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "role", Role(self.role))

    @classmethod
    def from_samples(cls, samples: Iterable[Sample], role: Role = Role.TRAIN) -> "Dataset":
        samples = list(samples)
        if not samples:
            raise EmptyInput("a dataset needs at least one sample")
        dims = {s.features.size for s in samples}
        if len(dims) != 1:
            raise PurifierError(f"samples have mixed dimensions {sorted(dims)}")
        return cls(
            ids=[s.id for s in samples],
            features=np.stack([s.features for s in samples]),
            labels=[int(s.label) for s in samples],
            role=role,
        )

    @property
    def n(self) -> int:
        return int(self.ids.size)

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    def __len__(self) -> int:
        return self.n

    @property
    def samples(self) -> tuple[Sample, ...]:
        return tuple(self.sample(i) for i in range(self.n))

    def sample(self, i: int) -> Sample:
        return Sample(int(self.ids[i]), self.features[i], Label(int(self.labels[i])))

    def take(self, positions: Sequence[int] | np.ndarray) -> "Dataset":
        """Sub-dataset at the given row positions (kept in ascending order)."""
        pos = np.sort(np.asarray(positions, dtype=np.int64))
        return Dataset(self.ids[pos], self.features[pos], self.labels[pos], self.role)

    def select_ids(self, ids: Sequence[int] | np.ndarray) -> "Dataset":
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.ids, ids)
        ok = (pos < self.n) & (self.ids[np.minimum(pos, self.n - 1)] == ids)
        if not np.all(ok):
            missing = ids[~ok][:5].tolist()
            raise AlignmentError(f"ids not present in dataset: {missing}")
        return self.take(pos)

    def with_labels(self, labels) -> "Dataset":
        return Dataset(self.ids, self.features, labels, self.role)

    def with_features(self, features) -> "Dataset":
        return Dataset(self.ids, features, self.labels, self.role)


@dataclass(frozen=True)
class NoiseRatio:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 <= a < 1.0) or math.isnan(a):
            raise PurifierError(f"noise ratio must lie in [0, 1), got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    def count(self, n: int) -> int:
        """Number of anomalies in a set of ``n``: round half-up of alpha * n."""
        return int(math.floor(self.alpha * n + 0.5))


@dataclass(frozen=True, eq=False)
class PartitionPlan:
    k: int
    assignment: np.ndarray
    seed: int

    def __post_init__(self):
        a = _frozen(np.array(self.assignment, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "assignment", a)
        if self.k < 1 or a.size < self.k:
            raise InvalidPartition(f"need 1 <= k <= N, got k={self.k}, N={a.size}")
        if a.min() < 0 or a.max() >= self.k:
            raise InvalidPartition("subset index out of range")
        sizes = np.bincount(a, minlength=self.k)
        if sizes.min() < 1 or sizes.max() - sizes.min() > 1:
            raise InvalidPartition(f"unbalanced partition sizes {sizes.tolist()}")

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    def members(self, j: int) -> np.ndarray:
        """Row positions assigned to subset ``j``, ascending."""
        return np.flatnonzero(self.assignment == j)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def __eq__(self, other):
        if not isinstance(other, PartitionPlan):
            return NotImplemented
        return (
            self.k == other.k
            and self.seed == other.seed
            and np.array_equal(self.assignment, other.assignment)
        )


@dataclass(frozen=True, eq=False)
class ConsensusScores:
    scores: np.ndarray

    def __post_init__(self):
        s = np.array(self.scores, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(s)):
            raise PurifierError("consensus scores must be finite")
        object.__setattr__(self, "scores", _frozen(s))

    def __len__(self) -> int:
        return int(self.scores.size)


@dataclass(frozen=True, eq=False)
class PurifiedSet:
    retained_ids: np.ndarray
    tau: float
    t: float

    def __post_init__(self):
        object.__setattr__(
            self, "retained_ids", _frozen(np.array(self.retained_ids, dtype=np.int64).reshape(-1))
        )

    def __len__(self) -> int:
        return int(self.retained_ids.size)

    def __eq__(self, other):
        if not isinstance(other, PurifiedSet):
            return NotImplemented
        return (
            np.array_equal(self.retained_ids, other.retained_ids)
            and self.tau == other.tau
            and self.t == other.t
        )


def mix_seed(master_seed: int, j: int) -> int:
    """Derive the seed of stream ``j`` from ``master_seed`` (splitmix64 finalizer)."""
    z = (int(master_seed) + (int(j) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def partition_dataset(dataset: Dataset, k: int, seed: int) -> PartitionPlan:
    """Randomly split ``dataset`` into ``k`` balanced, disjoint subsets.

    The row positions are shuffled with a generator seeded by ``seed`` and
    dealt round-robin, so subset sizes differ by at most one.
    """
    n = len(dataset)
    if not isinstance(k, (int, np.integer)) or k < 1 or k > n:
        raise InvalidPartition(f"k must satisfy 1 <= k <= N={n}, got {k}")
    order = np.random.default_rng(int(seed) & _MASK64).permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[order] = np.arange(n, dtype=np.int64) % k
    return PartitionPlan(k=int(k), assignment=assignment, seed=int(seed))


def retained_count(n: int, t: float) -> int:
    """max(1, floor(t * n)), with t * n snapped to 9 decimals against float noise."""
    _check_t(t)
    return max(1, int(math.floor(round(t * n, 9))))


def _check_t(t):
    if not (0.0 < t <= 1.0):
        raise InvalidQuantile(f"t must lie in (0, 1], got {t}")


def _as_scores(scores) -> np.ndarray:
    if isinstance(scores, ConsensusScores):
        return scores.scores
    return np.asarray(scores, dtype=np.float64).reshape(-1)


def compute_threshold(scores, t: float) -> float:
    """Nearest-rank ``t``-quantile: the m-th smallest score, m = max(1, floor(t N))."""
    _check_t(t)
    s = _as_scores(scores)
    if s.size == 0:
        raise EmptyInput("cannot take a quantile of no scores")
    m = retained_count(s.size, t)
    return float(np.partition(s, m - 1)[m - 1])


def select_pure(dataset: Dataset, scores, t: float) -> PurifiedSet:
    """Keep the ``m`` lowest-scoring samples; ties broken by ascending id."""
    _check_t(t)
    s = _as_scores(scores)
    if s.size != len(dataset):
        raise AlignmentError(f"{s.size} scores for {len(dataset)} samples")
    m = retained_count(s.size, t)
    order = np.lexsort((dataset.ids, s))[:m]
    return PurifiedSet(
        retained_ids=np.sort(dataset.ids[order]), tau=float(s[order[-1]]), t=float(t)
    )
