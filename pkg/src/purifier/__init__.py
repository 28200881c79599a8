"""Contamination-robust unsupervised anomaly detection.

Stage 1 partitions a possibly contaminated training set, fits one scorer per
subset, averages every scorer's opinion of every sample and keeps the
lowest-scoring fraction. Stage 2 fits the final detector on what was kept.
"""

from .core import (
    ConsensusScores,
    Dataset,
    Label,
    NoiseRatio,
    PartitionPlan,
    PurifiedSet,
    Role,
    Sample,
    compute_threshold,
    mix_seed,
    partition_dataset,
    select_pure,
)
from .datagen import SyntheticConfig, generate
from .detect import DetectionResult, run_stage2
from .errors import *  # noqa: F401,F403
from .metrics import PurityBreakdown, auroc, contamination_rate, purity_breakdown
from .scorers import FittedScorer, ScorerConfig, ScorerKind, fit, representation, score, score_batch
from .screening import (
    ScoreMatrix,
    Stage1Result,
    build_score_matrix,
    consensus,
    cross_model_divergence,
    divergences,
    run_stage1,
    train_submodels,
)

__version__ = "0.1.0"
