# %% [markdown]
# # Gates and states
#
# Amplitudes live in a flat complex array of length 2**n. Qubit q is bit q
# of the index, counting from the least significant bit.

# %%
import numpy as np

from qentangle import (apply_controlled_phase, apply_single_qubit_gate, basis_state, haar_rotation,
                       make_rng, product_state, sample_haar_single_qubit)
from qentangle.statevector import H

psi = basis_state(3, 0b001)  # qubit 0 set, qubits 1 and 2 clear
print(np.flatnonzero(psi))  # -> [1]

# %% [markdown]
# Gates return a new array; the input is never touched.

# %%
plus = apply_single_qubit_gate(basis_state(2, 0), H, 0)
print(np.round(plus, 3))

# %% [markdown]
# The entangling gate exp(i pi/4 Z_i Z_j) is diagonal. Basis states whose
# two bits agree pick up e^{i pi/4}, the others e^{-i pi/4}.

# %%
for idx in range(4):
    out = apply_controlled_phase(basis_state(2, idx), 0, 1)
    print(f"|{idx:02b}> phase {np.angle(out[idx]) / np.pi:+.2f} pi")

# %% [markdown]
# Random rotations are built from three uniforms. Fixed inputs give a fixed
# matrix; a seeded generator gives reproducible random ones.

# %%
u = haar_rotation(0.25, 0.1, 0.7)
print(np.allclose(u.conj().T @ u, np.eye(2)), np.round(np.linalg.det(u), 12))

rng = make_rng(42)
zs = [abs(sample_haar_single_qubit(rng)[0, 0]) ** 2 * 2 - 1 for _ in range(20_000)]
print("mean Bloch z", np.mean(zs).round(3), "variance", np.var(zs).round(3), "(uniform: 0, 1/3)")

# %% [markdown]
# Product states take one 2-vector per qubit, row q for qubit q.

# %%
phi = product_state([[1, 0], [0, 1], [1 / np.sqrt(2), 1 / np.sqrt(2)]])
print(np.flatnonzero(np.abs(phi) > 1e-12))  # |q2 q1 q0> = |0 1 0> and |1 1 0>
