# %% [markdown]
# # Building similarity spaces with SMACOF
#
# A dissimilarity matrix goes in, a configuration of points comes out.
# We make a toy data set whose structure we know (points on a circle),
# so we can watch both MDS variants recover it.

# %%
import numpy as np

from simspace import DissimilarityMatrix, fit_mds, evaluate_stress, dimension_sweep
from simspace.mds import MdsOptions

angles = np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False)
circle = np.column_stack([np.cos(angles), np.sin(angles)])
labels = tuple(f"item{i:02d}" for i in range(12))

diffs = circle[:, None, :] - circle[None, :, :]
distances = np.sqrt((diffs**2).sum(-1))
delta = DissimilarityMatrix(values=distances, labels=labels)

# %% [markdown]
# ## Metric fit
#
# Metric SMACOF fits distances to a linear transform of the
# dissimilarities.  Since our "ratings" are exact distances, two
# dimensions suffice for a near-zero stress.

# %%
options = MdsOptions(mode="metric", dims=2, seed=42, restarts=32, max_iterations=500)
result = fit_mds(delta, options)
print("metric stress:", result.stress)
print("winning restart:", result.best_restart)

# %% [markdown]
# ## Nonmetric fit
#
# Nonmetric SMACOF only tries to match the *ordering* of the
# dissimilarities.  Squaring the ratings destroys linearity but not
# order, so the nonmetric stress stays at zero while the metric stress
# of the same solution does not.

# %%
warped = DissimilarityMatrix(values=distances**2, labels=labels)
nonmetric = fit_mds(
    delta=warped,
    options=MdsOptions(mode="nonmetric", dims=2, seed=42, restarts=32, max_iterations=500),
)
print("nonmetric stress on warped ratings:", nonmetric.stress)
print(
    "metric stress of that same configuration:",
    evaluate_stress(nonmetric.configuration, warped, "metric"),
)

# %% [markdown]
# ## Choosing the dimensionality
#
# A Scree table shows how stress falls as dimensions are added; an
# elbow suggests the right size.  For circle data the elbow is at two.

# %%
entries = dimension_sweep(
    delta,
    (1, 4),
    MdsOptions(mode="metric", dims=1, seed=7, restarts=16, max_iterations=300),
)
print("dims  metric_stress  nonmetric_stress")
for entry in entries:
    print(
        f"{entry.dims:>4}  {entry.metric_stress:>13.6f}  {entry.nonmetric_stress:>16.6f}"
    )
