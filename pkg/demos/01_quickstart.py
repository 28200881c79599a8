# %% [markdown]
# # Quickstart: purify a contaminated training set, then detect
#
# A synthetic training set where 20% of the samples are unlabeled anomalies.

# %%
from purifier import (
    ScorerConfig, SyntheticConfig, auroc, contamination_rate, generate,
    purity_breakdown, run_stage1, run_stage2,
)

train, test = generate(SyntheticConfig(alpha=0.2, seed=0))
print(f"train: {train.n} samples, {int((train.labels == 1).sum())} anomalous")

# %% [markdown]
# Stage 1: five sub-models, one per random subset, each score the whole set.
# The 40% of samples with the lowest mean score are kept.

# %%
s1 = run_stage1(train, k=5, t=0.40, config=ScorerConfig(kind="knn"), master_seed=0)
print("score matrix", s1.matrix.shape, "threshold", round(s1.pure.tau, 4))
print("kept:", purity_breakdown(s1.pure, train))
print("contamination before", contamination_rate(train.ids, train), "after", contamination_rate(s1.pure, train))

# %% [markdown]
# Stage 2: the final detector trained on the kept samples vs. on everything.

# %%
purified = run_stage2(train, s1.pure, test, seed=0)
raw = run_stage2(train, None, test, seed=0)
print(f"test AUROC  purified={auroc(test.labels, purified.test_scores):.4f}  raw={auroc(test.labels, raw.test_scores):.4f}")
