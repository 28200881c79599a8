"""Stage 1: partition, fit sub-models, cross-score, aggregate, purify."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .core import (
    ConsensusScores,
    Dataset,
    PartitionPlan,
    PurifiedSet,
    mix_seed,
    partition_dataset,
    select_pure,
)
from .errors import AlignmentError, DimensionError, DivergenceUndefined, FitError, PurifierError
from .scorers import FittedScorer, ScorerConfig, fit, representation, score_batch


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """N x k raw scores; column j comes from the sub-model fitted on subset j."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise PurifierError(f"score matrix must be a non-empty 2-D array, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise PurifierError("score matrix contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True, eq=False)
class Stage1Result:
    plan: PartitionPlan
    matrix: ScoreMatrix
    consensus: ConsensusScores
    pure: PurifiedSet
    per_model_pure: tuple


def _check_plan(dataset: Dataset, plan: PartitionPlan):
    if plan.n != len(dataset):
        raise AlignmentError(f"plan covers {plan.n} samples, dataset has {len(dataset)}")


def train_submodels(
    dataset: Dataset, plan: PartitionPlan, config: ScorerConfig, threads: int | None = 1
) -> list[FittedScorer]:
    """Fit one scorer per subset, each with seed ``mix_seed(plan.seed, j)``."""
    _check_plan(dataset, plan)

    def fit_one(j):
        cfg = dataclasses.replace(config, seed=mix_seed(plan.seed, j))
        try:
            return fit(cfg, dataset.features[plan.members(j)], train_subset_index=j)
        except FitError as exc:
            raise FitError(f"subset {j}: {exc}") from exc

    return ordered_map(fit_one, range(plan.k), threads)


def build_score_matrix(
    submodels, dataset: Dataset, threads: int | None = 1
) -> ScoreMatrix:
    """Score every training sample with every sub-model, native subsets included."""
    for m in submodels:
        if m.dim != dataset.dim:
            raise DimensionError(f"sub-model dimension {m.dim} != dataset dimension {dataset.dim}")
    cols = ordered_map(lambda m: score_batch(m, dataset.features), submodels, threads)
    return ScoreMatrix(np.column_stack(cols))


def consensus(
    matrix: ScoreMatrix,
    plan: PartitionPlan | None = None,
    exclude_native: bool = False,
    normalize: bool = False,
) -> ConsensusScores:
    """Row-wise mean of the score matrix, summed in column order.

    ``normalize`` z-scores each column first; ``exclude_native`` drops each
    sample's own sub-model from its average (needs ``plan`` and k >= 2).
    """
    v = matrix.values
    n, k = v.shape
    if normalize:
        mu = v.mean(axis=0)
        sd = v.std(axis=0)
        sd[sd == 0] = 1.0
        v = (v - mu) / sd
    if not exclude_native:
        acc = v[:, 0].copy()
        for j in range(1, k):
            acc += v[:, j]
        return ConsensusScores(acc / k)

    if plan is None:
        raise PurifierError("exclude_native needs the partition plan")
    if k < 2:
        raise PurifierError("exclude_native needs at least two sub-models")
    if plan.n != n or plan.k != k:
        raise AlignmentError("plan does not match the score matrix")
    acc = np.zeros(n)
    for j in range(k):
        acc += np.where(plan.assignment == j, 0.0, v[:, j])
    return ConsensusScores(acc / (k - 1))


def cross_model_divergence(submodels, plan: PartitionPlan, dataset: Dataset, i: int) -> float:
    """Mean distance between the native and each non-native representation of sample i."""
    k = len(submodels)
    if k < 2:
        raise DivergenceUndefined("divergence needs at least two sub-models")
    _check_plan(dataset, plan)
    j = int(plan.assignment[i])
    x = dataset.features[i]
    native = representation(submodels[j], x)
    total = 0.0
    for l in range(k):
        if l != j:
            total += float(np.linalg.norm(native - representation(submodels[l], x)))
    return total / (k - 1)


def divergences(submodels, plan: PartitionPlan, dataset: Dataset, threads: int | None = 1) -> np.ndarray:
    return np.array(
        ordered_map(lambda i: cross_model_divergence(submodels, plan, dataset, i), range(len(dataset)), threads)
    )


def run_stage1(
    dataset: Dataset,
    k: int = 5,
    t: float = 0.40,
    config: ScorerConfig | None = None,
    master_seed: int = 0,
    *,
    exclude_native: bool = False,
    normalize: bool = False,
    threads: int | None = 1,
    return_submodels: bool = False,
):
    config = config or ScorerConfig()
    plan = partition_dataset(dataset, k, master_seed)
    models = train_submodels(dataset, plan, config, threads=threads)
    matrix = build_score_matrix(models, dataset, threads=threads)
    cons = consensus(matrix, plan, exclude_native=exclude_native, normalize=normalize)
    pure = select_pure(dataset, cons, t)
    per_model = tuple(select_pure(dataset, matrix.values[:, j], t) for j in range(k))
    result = Stage1Result(plan, matrix, cons, pure, per_model)
    return (result, models) if return_submodels else result
