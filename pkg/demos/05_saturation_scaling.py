# %% [markdown]
# # How long until saturation?
#
# t* is the first recorded step from which an ensemble curve stays above 90%
# of its late-time level. Repeating this for several register sizes shows
# how the time to saturate scales with n. Small sizes keep this demo quick;
# the command-line ``saturation`` subcommand runs the full study.

# %%
from qentangle import OptimizerOptions, saturation_study

rows, fits = saturation_study(
    ns=[4, 5, 6], geometries=["local", "nonlocal"], steps_for_n=lambda n: 30 * n,
    realizations=60, seed=2, groverian_options=OptimizerOptions(restarts=4, tolerance=1e-8),
    g_every=10, batches=4, interpolate=True)

for r in rows:
    print(f"n={r.n} {r.geometry.value:8s} {r.measure}: level={r.saturation_value:.3f} t*={r.t_star:6.2f}"
          f" +- {r.t_star_sem:.2f}")

# %% [markdown]
# Straight-line and parabola fits of t* against n, one per geometry and measure.
# K saturates within a handful of steps and its mean is noisy, so with only 60
# runs its fit is not meaningful; Q and G already show clean trends.

# %%
for (geometry, measure), by_degree in fits.items():
    lin = by_degree[1]
    print(f"{geometry.value:8s} {measure}: slope {lin.coefficients[1]:.2f}, R2 {lin.r2:.3f}")
