"""Closed-form observables: single-qubit marginals, Q, fidelity and K."""
from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .statevector import _check_qubit, inner_product, num_qubits

__all__ = [
    "average_bipartite_Q",
    "average_bipartite_Q_from_eigenvalues",
    "fidelity",
    "largest_eigenvalue",
    "log_infidelity_K",
    "purity",
    "reduced_density_single",
]


def _state(state) -> np.ndarray:
    psi = np.ascontiguousarray(state, dtype=np.complex128)
    num_qubits(psi)
    return psi


def reduced_density_single(state, q: int) -> np.ndarray:
    """2x2 reduced density matrix of qubit ``q`` (partial trace over the others)."""
    psi = _state(state)
    q = _check_qubit(q, num_qubits(psi))
    r00, r11, r01 = _kernels.reduced_density(psi, q)
    return np.array([[r00, r01], [np.conj(r01), r11]], dtype=np.complex128)


def purity(rho) -> float:
    """Tr(rho^2) of a Hermitian matrix."""
    rho = np.asarray(rho)
    return float(np.real(np.sum(rho * rho.conj())))


def largest_eigenvalue(rho) -> float:
    """Largest eigenvalue of a 2x2 Hermitian matrix via the quadratic formula."""
    a = float(np.real(rho[0, 0]))
    d = float(np.real(rho[1, 1]))
    off = abs(rho[0, 1])
    return 0.5 * (a + d) + math.hypot(0.5 * (a - d), off)


def average_bipartite_Q(state) -> float:
    """Q = 2 - (2/n) sum_q Tr(rho_q^2); 0 for product states, at most 1."""
    psi = _state(state)
    n = num_qubits(psi)
    return 2.0 - 2.0 * _kernels.purity_sum(psi, n) / n


def average_bipartite_Q_from_eigenvalues(state) -> float:
    """Same quantity as :func:`average_bipartite_Q`, routed through the marginals' top eigenvalues."""
    psi = _state(state)
    n = num_qubits(psi)
    total = 0.0
    for q in range(n):
        p = largest_eigenvalue(reduced_density_single(psi, q))
        total += p * p + (1.0 - p) * (1.0 - p)
    return 2.0 - 2.0 * total / n


def fidelity(a, b) -> float:
    """|<a|b>|."""
    return abs(inner_product(a, b))


def log_infidelity_K(a, b) -> float:
    """-ln |<a|b>|, with ``math.inf`` for orthogonal states."""
    f = fidelity(a, b)
    if f == 0.0:
        return math.inf
    return -math.log(min(f, 1.0))
