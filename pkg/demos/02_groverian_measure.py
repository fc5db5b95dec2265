# %% [markdown]
# # Closest product states and the Groverian measure
#
# P_max is the largest squared overlap of a state with any product state.
# G = -ln P_max is zero exactly on product states and adds up over
# independent subsystems.

# %%
import math

import numpy as np

from qentangle import OptimizerOptions, average_bipartite_Q, groverian_G, p_max, p_max_oracle_grid

ghz = np.zeros(16, complex)
ghz[0] = ghz[-1] = 1 / math.sqrt(2)
w = np.zeros(8, complex)
w[[1, 2, 4]] = 1 / math.sqrt(3)

print("GHZ4 G =", groverian_G(ghz), " ln 2 =", math.log(2))
print("W3   G =", groverian_G(w), " ln 9/4 =", math.log(9 / 4))

# %% [markdown]
# The optimizer alternates single-qubit updates from several random starts.
# The result carries the best product factors and how much work was done.

# %%
res = p_max(w, OptimizerOptions(restarts=5, seed=3))
print(res.p_max, res.sweeps_used, res.converged)
print(np.round(np.abs(res.best_ansatz) ** 2, 3))  # each qubit leans toward |0> with weight 2/3

# %% [markdown]
# For three qubits or fewer a brute-force grid gives an independent check.

# %%
print("grid P_max for W3:", p_max_oracle_grid(w, 0.02), " exact 4/9 =", 4 / 9)

# %% [markdown]
# Q and G need not agree on which state is "more" entangled: GHZ has every
# qubit maximally mixed, W does not, yet W is further from product states.

# %%
ghz3 = np.zeros(8, complex)
ghz3[0] = ghz3[-1] = 1 / math.sqrt(2)
for name, s in (("GHZ3", ghz3), ("W3", w)):
    print(f"{name}: Q={average_bipartite_Q(s):.4f} G={groverian_G(s):.4f}")
