# %% [markdown]
# # Retained samples vs. number of subsets
#
# For each noise ratio, count how many normal and anomalous samples survive
# purification, for the consensus score and for single sub-models on their
# own. The sweep runner does the bookkeeping; charts land next to this file.

# %%
from pathlib import Path

from purifier.harness.config import RunConfig
from purifier.harness.svg import retained_counts_chart
from purifier.harness.sweep import run_sweep

cfg = RunConfig(seed_list=tuple(range(5)))
report = run_sweep(cfg, threads=0)
cells = report.summary()

# %%
print(f"{'alpha':>5} {'k':>2} {'anom(cons)':>10} {'anom(sub)':>9} {'norm(cons)':>10} {'AUROC':>7}")
for c in cells:
    print(f"{c['alpha']:5.1f} {c['k']:2d} {c['mean_retained_anomalous']:10.1f} "
          f"{c['mean_submodel_retained_anomalous']:9.1f} {c['mean_retained_normal']:10.1f} {c['mean_stage2_auroc']:7.4f}")

# %%
out = Path(__file__).with_name("figures")
out.mkdir(exist_ok=True)
for alpha in sorted({c["alpha"] for c in cells}):
    (out / f"retained_alpha_{alpha:g}.svg").write_text(retained_counts_chart(alpha, cells))
print("charts in", out)
