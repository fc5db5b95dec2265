"""Closest product state and the logarithmic Groverian measure.

``p_max`` maximizes |<phi|psi>|^2 over product states phi by alternating
single-factor updates: with every factor but one held fixed, the optimal
remaining factor is the normalized environment vector and the overlap it
achieves is that vector's norm. Sweeps repeat until the overlap gain per
sweep drops below the tolerance; several random starts guard against local
maxima.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .sampling import bloch_factors, make_rng
from .statevector import _check_qubit, num_qubits

__all__ = [
    "DegenerateEnvironmentError",
    "OptimizerOptions",
    "PMaxResult",
    "environment_vector",
    "groverian_G",
    "p_max",
    "p_max_oracle_grid",
]

# environment norms at or below this are treated as exactly zero
DEGENERATE_EPS = 1e-14
# spare replacement factors drawn per restart for vanishing environments
_SPARES_PER_QUBIT = 2


class DegenerateEnvironmentError(ValueError):
    """The environment of a factor vanishes; every choice of that factor gives zero overlap."""


@dataclass(frozen=True)
class OptimizerOptions:
    """Settings for :func:`p_max`.

    ``seed`` selects the substream that draws the random starting ansatzes.
    """

    restarts: int = 20
    max_sweeps: int = 1000
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")


@dataclass
class PMaxResult:
    p_max: float
    best_ansatz: np.ndarray  # (n, 2) factors, row q is qubit q
    sweeps_used: int
    converged: bool
    # most negative overlap change over all single-factor updates (all restarts)
    worst_step: float = math.inf


def _state(state) -> np.ndarray:
    psi = np.ascontiguousarray(state, dtype=np.complex128)
    num_qubits(psi)
    return psi


def environment_vector(state, ansatz, q: int) -> np.ndarray:
    """Contract ``state`` with the conjugates of every ansatz factor except ``q``.

    Normalizing the result gives the best factor for qubit ``q``; its norm is
    the overlap that factor attains.
    """
    psi = _state(state)
    n = num_qubits(psi)
    phi = np.ascontiguousarray(ansatz, dtype=np.complex128)
    if phi.shape != (n, 2):
        raise ValueError(f"ansatz must have shape ({n}, 2)")
    q = _check_qubit(q, n)
    scratch = (np.empty(psi.size // 2 + 1, np.complex128), np.empty(psi.size // 2 + 1, np.complex128))
    e0, e1 = _kernels.environment(psi, phi, q, *scratch)
    env = np.array([e0, e1])
    if np.linalg.norm(env) <= DEGENERATE_EPS:
        raise DegenerateEnvironmentError(f"environment of qubit {q} vanishes")
    return env


def _overlap(psi, phi, scratch) -> float:
    return abs(_kernels.overlap(psi, phi, *scratch))


def p_max(state, options: OptimizerOptions | None = None, rng: np.random.Generator | None = None) -> PMaxResult:
    """Largest squared overlap of ``state`` with any product state.

    Starting ansatzes are Bloch-uniform, drawn from ``rng`` or, if omitted,
    from a generator seeded with ``options.seed``. Among restarts the first
    one reaching the best overlap (to 1e-12) wins.
    """
    options = options or OptimizerOptions()
    psi = _state(state)
    n = num_qubits(psi)
    if rng is None:
        rng = make_rng(options.seed)
    dim = psi.size
    tops = np.empty(2 * dim, np.complex128)
    low_a = np.empty(dim, np.complex128)
    low_b = np.empty(dim, np.complex128)
    scratch = (low_a, low_b)

    starts = bloch_factors(rng.random((options.restarts * n, 2))).reshape(options.restarts, n, 2)
    spares = bloch_factors(rng.random((options.restarts * n * _SPARES_PER_QUBIT, 2)))
    spare_pos = np.zeros(1, np.int64)

    best = -1.0
    best_phi = None
    total_sweeps = 0
    best_converged = False
    worst = math.inf
    for r in range(options.restarts):
        phi = np.ascontiguousarray(starts[r])
        sweeps_left = options.max_sweeps
        current = _overlap(psi, phi, scratch)
        while True:
            status, current, done, w = _kernels.als_sweeps(
                psi, phi, sweeps_left, options.tolerance, current,
                tops, low_a, low_b, DEGENERATE_EPS, spares, spare_pos)
            total_sweeps += done
            sweeps_left -= done
            worst = min(worst, w)
            if status != _kernels.ALS_DEGENERATE or sweeps_left <= 0:
                break
            # spare pool exhausted: top it up and resume
            spares = bloch_factors(rng.random((n * _SPARES_PER_QUBIT, 2)))
            spare_pos[0] = 0
            current = _overlap(psi, phi, scratch)
        if current > best + 1e-12:
            best = current
            best_phi = phi.copy()
            best_converged = status == _kernels.ALS_CONVERGED
        if best >= 1.0 - 1e-12:
            break
    return PMaxResult(
        p_max=min(best * best, 1.0),
        best_ansatz=best_phi,
        sweeps_used=total_sweeps,
        converged=best_converged,
        worst_step=worst,
    )


def groverian_G(state, options: OptimizerOptions | None = None, rng: np.random.Generator | None = None) -> float:
    """Logarithmic Groverian measure -ln P_max."""
    pm = p_max(state, options, rng).p_max
    return -math.log(min(pm, 1.0))


def _grid_factors(resolution: float) -> np.ndarray:
    n_theta = int(math.ceil(math.pi / resolution)) + 1
    theta = np.linspace(0.0, math.pi, n_theta)
    phase = np.arange(0.0, 2.0 * math.pi, resolution)
    t, p = np.meshgrid(theta, phase, indexing="ij")
    t = t.ravel()
    p = p.ravel()
    return np.stack([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)], axis=1)


def p_max_oracle_grid(state, angular_resolution: float) -> float:
    """Validation value for P_max on at most three qubits.

    Qubit 0 is scanned exhaustively over a polar/azimuth grid with the given
    spacing (global phase fixed by a real first amplitude). For each grid
    point the remaining factors are maximized exactly: by the norm of the
    leftover single-qubit vector (n = 2) or by the top singular value of
    the leftover 2x2 amplitude matrix (n = 3). The result is a lower bound
    on P_max that tightens as O(resolution^2).
    """
    psi = _state(state)
    n = num_qubits(psi)
    if n > 3:
        raise ValueError("grid oracle is limited to n <= 3")
    if not angular_resolution > 0:
        raise ValueError("angular_resolution must be > 0")
    grid = _grid_factors(angular_resolution)
    # rows: remaining index (qubits 1..n-1), columns: grid points
    rest = psi.reshape(-1, 2) @ grid.conj().T
    if n == 1:
        vals = np.abs(rest[0]) ** 2
    elif n == 2:
        vals = np.sum(np.abs(rest) ** 2, axis=0)
    else:
        # rest[2*b2 + b1] -> 2x2 matrix in (b2, b1); top singular value squared
        fro = np.sum(np.abs(rest) ** 2, axis=0)
        det = rest[0] * rest[3] - rest[1] * rest[2]
        disc = np.sqrt(np.maximum(fro * fro - 4.0 * np.abs(det) ** 2, 0.0))
        vals = 0.5 * (fro + disc)
    return float(np.max(vals))
