# %% [markdown]
# # One realization of the scheme
#
# A run starts from a random product state. Each step applies the entangling
# gate to a random admissible pair and then fresh random rotations to both
# qubits of that pair. On the ring only neighbours may interact.

# %%
from qentangle import OptimizerOptions, SchemeConfig, SchemeRun, run_trajectory

cfg = SchemeConfig(n=6, geometry="local", total_steps=60, seed=11)
run = SchemeRun(cfg, run_index=0)
for _ in range(5):
    run.step()
    print("t =", run.t, "pair", run.last_pair)
print("gates so far [two-qubit, single-qubit]:", run.gate_counts)

# %% [markdown]
# ``run_trajectory`` records K, Q and G along the way. Rerunning the same
# (seed, run_index) reproduces every number.

# %%
traj = run_trajectory(cfg, record_times=range(0, 61, 10), groverian_options=OptimizerOptions(restarts=4))
for t, k, q, g in zip(traj.times, traj.K, traj.Q, traj.G):
    print(f"t={t:3d}  K={k:6.3f}  Q={q:.3f}  G={g:.3f}")

again = run_trajectory(cfg, record_times=range(0, 61, 10), groverian_options=OptimizerOptions(restarts=4))
print("reproducible:", (again.G == traj.G).all())
