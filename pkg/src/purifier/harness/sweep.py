"""Ablation sweep over (noise ratio, subset count, seed)."""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass

import numpy as np

from .._parallel import ordered_map
from ..datagen import generate
from ..detect import run_stage2
from ..errors import ConfigError, PurifierError
from ..metrics import auroc, contamination_rate, purity_breakdown
from ..screening import run_stage1
from .config import RunConfig

BREAKDOWN_FIELDS = ("retained_normal", "retained_anomalous", "discarded_normal", "discarded_anomalous")

COLUMNS = (
    ("alpha", "k", "seed", "contamination_rate")
    + BREAKDOWN_FIELDS
    + ("submodel_mean_retained_normal", "submodel_mean_retained_anomalous")
    + tuple(f"submodel_{f}" for f in BREAKDOWN_FIELDS)
    + ("stage2_auroc", "raw_auroc")
)


class SweepError(PurifierError):
    category = "sweep"
    exit_code = 6


@dataclass(frozen=True)
class SweepReport:
    rows: tuple  # of dicts keyed by COLUMNS, sorted by (alpha, k, seed)

    def __len__(self):
        return len(self.rows)

    def to_csv(self) -> str:
        lines = [",".join(COLUMNS)]
        for row in self.rows:
            lines.append(",".join(_cell(row[c]) for c in COLUMNS))
        return "\n".join(lines) + "\n"

    def summary(self) -> list[dict]:
        """Per-(alpha, k) means over seeds."""
        cells = []
        keyed = itertools.groupby(self.rows, key=lambda r: (r["alpha"], r["k"]))
        for (alpha, k), group in keyed:
            group = list(group)
            mean = lambda name: float(np.mean([r[name] for r in group]))  # noqa: E731
            cells.append(
                {
                    "alpha": alpha,
                    "k": k,
                    "n_seeds": len(group),
                    "mean_contamination_rate": mean("contamination_rate"),
                    "mean_retained_anomalous": mean("retained_anomalous"),
                    "mean_retained_normal": mean("retained_normal"),
                    "mean_submodel_retained_anomalous": mean("submodel_mean_retained_anomalous"),
                    "mean_submodel_retained_normal": mean("submodel_mean_retained_normal"),
                    "consensus_le_submodel_fraction": float(
                        np.mean([r["retained_anomalous"] <= r["submodel_mean_retained_anomalous"] for r in group])
                    ),
                    "mean_stage2_auroc": mean("stage2_auroc"),
                    "mean_raw_auroc": mean("raw_auroc"),
                }
            )
        return cells


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_triple(cfg: RunConfig, alpha: float, k: int, seed: int) -> dict:
    if cfg.synthetic is None:
        raise ConfigError("ablate needs a synthetic dataset section")
    syn = dataclasses.replace(cfg.synthetic, alpha=alpha, seed=seed)
    train, test = generate(syn)
    s1 = run_stage1(
        train, k, cfg.t, cfg.stage1_scorer, seed,
        exclude_native=cfg.exclude_native, normalize=cfg.normalize,
    )
    bd = purity_breakdown(s1.pure, train)
    subs = [purity_breakdown(p, train) for p in s1.per_model_pure]
    final = run_stage2(train, s1.pure, test, cfg.stage2_scorer, seed)
    raw = run_stage2(train, None, test, cfg.stage2_scorer, seed)
    row = {"alpha": float(alpha), "k": int(k), "seed": int(seed),
           "contamination_rate": contamination_rate(s1.pure, train)}
    row.update(bd.to_dict())
    row["submodel_mean_retained_normal"] = float(np.mean([b.retained_normal for b in subs]))
    row["submodel_mean_retained_anomalous"] = float(np.mean([b.retained_anomalous for b in subs]))
    for f in BREAKDOWN_FIELDS:
        row[f"submodel_{f}"] = [getattr(b, f) for b in subs]
    row["stage2_auroc"] = auroc(test.labels, final.test_scores)
    row["raw_auroc"] = auroc(test.labels, raw.test_scores)
    return row


def run_sweep(cfg: RunConfig, threads: int | None = 1) -> SweepReport:
    """Run the full cross product; rows come back sorted whatever the thread count."""
    triples = list(
        itertools.product(sorted(set(cfg.alpha_list)), sorted(set(cfg.k_list)), sorted(set(cfg.seed_list)))
    )

    def one(triple):
        alpha, k, seed = triple
        try:
            return run_triple(cfg, alpha, k, seed)
        except PurifierError as exc:
            raise SweepError(f"alpha={alpha}, k={k}, seed={seed}: {exc}") from exc

    return SweepReport(tuple(ordered_map(one, triples, threads)))
