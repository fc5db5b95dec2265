"""Pure states of n qubits stored as flat complex amplitude arrays.

Qubit ``q`` is bit ``q`` of the basis index, counting from the least
significant bit, so ``basis_state(2, 1)`` is |01> with qubit 0 set.
A state is an ordinary 1-D ``complex128`` numpy array of length 2**n;
the functions here copy their input and never build 2**n x 2**n matrices.
"""
from __future__ import annotations

import numpy as np

from . import _kernels

__all__ = [
    "I2",
    "X",
    "Z",
    "H",
    "apply_controlled_phase",
    "apply_single_qubit_gate",
    "basis_state",
    "check_unitary",
    "inner_product",
    "num_qubits",
    "product_state",
]

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def num_qubits(state: np.ndarray) -> int:
    """Number of qubits of a flat amplitude array; raises if the length is not 2**n."""
    dim = np.shape(state)[0] if np.ndim(state) == 1 else -1
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"state must be a 1-D array of length 2**n with n >= 1, got shape {np.shape(state)}")
    return dim.bit_length() - 1


def _as_state(state) -> np.ndarray:
    psi = np.array(state, dtype=np.complex128, copy=True)
    num_qubits(psi)
    return psi


def _check_qubit(q: int, n: int) -> int:
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n} qubits")
    return int(q)


def basis_state(n: int, index: int) -> np.ndarray:
    """Computational basis state |index> of ``n`` qubits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= index < 2**n:
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    psi = np.zeros(2**n, dtype=np.complex128)
    psi[index] = 1.0
    return psi


def product_state(factors) -> np.ndarray:
    """Tensor product of single-qubit states; ``factors[q]`` is qubit q."""
    factors = np.asarray(factors, dtype=np.complex128)
    if factors.ndim != 2 or factors.shape[1] != 2 or factors.shape[0] < 1:
        raise ValueError("factors must have shape (n, 2)")
    psi = np.ones(1, dtype=np.complex128)
    for f in factors:
        # new qubit becomes the most significant bit
        psi = np.kron(f, psi)
    return psi


def check_unitary(gate, atol: float = 1e-12) -> np.ndarray:
    """Return ``gate`` as a 2x2 complex array after verifying U^dagger U = 1."""
    u = np.asarray(gate, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError(f"single-qubit gate must be 2x2, got {u.shape}")
    if not np.allclose(u.conj().T @ u, I2, rtol=0.0, atol=atol):
        raise ValueError("gate is not unitary")
    return u


def apply_single_qubit_gate(state, gate, q: int) -> np.ndarray:
    """Apply the 2x2 unitary ``gate`` to qubit ``q``; identity on the rest."""
    psi = _as_state(state)
    q = _check_qubit(q, num_qubits(psi))
    u = check_unitary(gate)
    _kernels.apply_1q(psi, u[0, 0], u[0, 1], u[1, 0], u[1, 1], q)
    return psi


def apply_controlled_phase(state, i: int, j: int) -> np.ndarray:
    """Apply exp(i pi/4 Z_i Z_j): phase e^{i pi/4} where bits i, j agree, e^{-i pi/4} otherwise."""
    psi = _as_state(state)
    n = num_qubits(psi)
    i = _check_qubit(i, n)
    j = _check_qubit(j, n)
    if i == j:
        raise ValueError("controlled-phase needs two distinct qubits")
    _kernels.apply_cphase(psi, i, j)
    return psi


def inner_product(a, b) -> complex:
    """<a|b>, conjugating the first argument."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    num_qubits(a)
    return complex(np.vdot(a, b))
