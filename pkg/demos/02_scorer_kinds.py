# %% [markdown]
# # Swapping the scorer
#
# Every stage accepts any of the three scorer kinds. PCA scores by
# reconstruction residual and Mahalanobis by whitened distance, so their
# contamination behaviour differs from the nearest-neighbour default.

# %%
import numpy as np

from purifier import ScorerConfig, SyntheticConfig, auroc, contamination_rate, generate, run_stage1, run_stage2

configs = {
    "knn": ScorerConfig(kind="knn"),
    "pca (2 comps)": ScorerConfig(kind="pca", pca_components=2),
    "mahalanobis": ScorerConfig(kind="mahalanobis"),
}

# %%
for alpha in (0.1, 0.2):
    print(f"alpha={alpha}")
    for name, cfg in configs.items():
        rates, aucs = [], []
        for seed in range(5):
            train, test = generate(SyntheticConfig(alpha=alpha, seed=seed))
            s1 = run_stage1(train, 5, 0.4, cfg, master_seed=seed)
            rates.append(contamination_rate(s1.pure, train))
            aucs.append(auroc(test.labels, run_stage2(train, s1.pure, test, cfg, seed).test_scores))
        print(f"  {name:14s} contamination={np.mean(rates):.3f}  stage-2 AUROC={np.mean(aucs):.4f}")
