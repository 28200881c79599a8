# %% [markdown]
# # Native vs. non-native representations
#
# A sample's own sub-model has seen it; the others have not. For a nearest
# neighbour scorer the representation is the nearest stored vector, so the
# gap between native and non-native representations is small for normals
# (every subset covers the normal cluster) and large for anomalies.

# %%
import numpy as np

from purifier import SyntheticConfig, divergences, generate, run_stage1

train, _ = generate(SyntheticConfig(alpha=0.1, seed=1))
s1, models = run_stage1(train, 5, 0.4, master_seed=1, return_submodels=True)
delta = divergences(models, s1.plan, train)
anom = train.labels == 1
print(f"mean divergence  normals={delta[~anom].mean():.3f}  anomalies={delta[anom].mean():.3f}")

# %%
# The divergence is a diagnostic only; purification ranks by mean score.
corr = np.corrcoef(delta, s1.consensus.scores)[0, 1]
print(f"correlation with consensus score: {corr:.3f}")
