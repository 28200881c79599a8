"""Evaluation metrics. Labels are read here and nowhere in the fitting path."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .core import Dataset, Label, PurifiedSet
from .errors import AlignmentError, UndefinedMetric


@dataclass(frozen=True)
class PurityBreakdown:
    retained_normal: int
    retained_anomalous: int
    discarded_normal: int
    discarded_anomalous: int

    @property
    def total(self) -> int:
        return self.retained_normal + self.retained_anomalous + self.discarded_normal + self.discarded_anomalous

    def to_dict(self) -> dict:
        return {
            "retained_normal": self.retained_normal,
            "retained_anomalous": self.retained_anomalous,
            "discarded_normal": self.discarded_normal,
            "discarded_anomalous": self.discarded_anomalous,
        }


def auroc(labels, scores) -> float:
    """Area under the ROC curve via the Mann-Whitney U statistic.

    Equals the fraction of (anomalous, normal) pairs ranked correctly, with
    tied pairs counted as one half.
    """
    y = np.asarray(labels).reshape(-1).astype(np.int64)
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    if y.size != s.size:
        raise AlignmentError(f"{y.size} labels but {s.size} scores")
    if np.any((y != Label.NORMAL) & (y != Label.ANOMALOUS)):
        raise UndefinedMetric("auroc needs every label to be Normal or Anomalous")
    pos = y == Label.ANOMALOUS
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetric("auroc needs both normal and anomalous samples")
    ranks = rankdata(s, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def contamination_rate(retained_ids, train: Dataset) -> float:
    ids = np.asarray(getattr(retained_ids, "retained_ids", retained_ids), dtype=np.int64)
    if ids.size == 0:
        raise UndefinedMetric("contamination of an empty set is undefined")
    labels = train.select_ids(ids).labels
    if np.any(labels == Label.UNKNOWN):
        raise UndefinedMetric("retained samples carry unknown labels")
    return float(np.count_nonzero(labels == Label.ANOMALOUS) / ids.size)


def purity_breakdown(pure: PurifiedSet, train: Dataset) -> PurityBreakdown:
    if np.any(train.labels == Label.UNKNOWN):
        raise UndefinedMetric("training set has unknown labels")
    kept = np.isin(train.ids, pure.retained_ids)
    if int(kept.sum()) != len(pure):
        raise AlignmentError("purified set references ids outside the training set")
    anom = train.labels == Label.ANOMALOUS
    return PurityBreakdown(
        retained_normal=int(np.count_nonzero(kept & ~anom)),
        retained_anomalous=int(np.count_nonzero(kept & anom)),
        discarded_normal=int(np.count_nonzero(~kept & ~anom)),
        discarded_anomalous=int(np.count_nonzero(~kept & anom)),
    )
