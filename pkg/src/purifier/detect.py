"""Stage 2: fit the final detector on the purified set and score a test set."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .core import Dataset, PurifiedSet
from .errors import DimensionError, FitError
from .scorers import ScorerConfig, fit, score_batch


@dataclass(frozen=True, eq=False)
class DetectionResult:
    test_scores: np.ndarray
    final_model_summary: dict
    trainset_id_list: np.ndarray


def run_stage2(
    train: Dataset,
    pure: PurifiedSet | None,
    test: Dataset,
    config: ScorerConfig | None = None,
    seed: int = 0,
    threads: int | None = 1,
) -> DetectionResult:
    """Fit on the retained training samples and score ``test``.

    ``pure=None`` fits on the whole training set (the unpurified baseline).
    """
    config = dataclasses.replace(config or ScorerConfig(), seed=int(seed))
    if test.dim != train.dim:
        raise DimensionError(f"test dimension {test.dim} != train dimension {train.dim}")
    if pure is not None and len(pure) == 0:
        raise FitError("purified set is empty")
    fit_on = train if pure is None else train.select_ids(pure.retained_ids)
    final = fit(config, fit_on)
    scores = score_batch(final, test.features, threads=threads)
    scores.setflags(write=False)
    return DetectionResult(
        test_scores=scores,
        final_model_summary={"kind": config.kind.value, "fitted_size": final.n_fitted},
        trainset_id_list=fit_on.ids,
    )
