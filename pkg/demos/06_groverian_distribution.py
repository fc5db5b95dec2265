# %% [markdown]
# # Distribution of G over runs
#
# Early on, G is spread out and small. After enough steps its histogram
# matches that of random states, which a two-sample KS test makes precise.

# %%
from scipy import stats

from qentangle import (OptimizerOptions, SchemeConfig, histogram_density, monte_carlo,
                       random_state_baseline)

n, runs, ts = 6, 300, [3, 8, 40]
opts = OptimizerOptions(restarts=6)
ens = monte_carlo(SchemeConfig(n, "nonlocal", max(ts), seed=4), runs, record_times=ts,
                  groverian_options=opts, g_times=ts)
_, baseline = random_state_baseline(n, runs, opts, seed=4)

for k, t in enumerate(ts):
    g = ens.samples["G"][:, k]
    res = stats.ks_2samp(g, baseline)
    print(f"t={t:3d}  mean G={g.mean():.3f}  KS D={res.statistic:.3f}  p={res.pvalue:.2g}")
print(f"random states: mean G={baseline.mean():.3f}")

# %% [markdown]
# Histograms are normalized to unit area so different series share an axis.

# %%
h = histogram_density(baseline, 12)
print((h.density * h.widths).sum())
