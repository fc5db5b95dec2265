"""The rotate-entangle-rotate iteration.

Each run starts from a random product state. One step picks a pair (i, j)
allowed by the geometry, applies exp(i pi/4 Z_i Z_j), then an independent
random rotation to qubit i followed by one to qubit j.

Randomness of run ``r`` under master seed ``s``:

* substream ``(s, r, 0)``: 2n uniforms for the initial state, then 7
  uniforms per step (pair selector, rotation on i, rotation on j);
* substream ``(s, r, 1, t)``: the optimizer starts used for G at step t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .groverian import OptimizerOptions, p_max
from .measures import average_bipartite_Q, log_infidelity_K
from .sampling import (Geometry, candidate_pairs, make_rng, pair_from_uniform,
                       sample_random_product_state)

__all__ = [
    "DRAWS_PER_STEP",
    "RunCompleteError",
    "SchemeConfig",
    "SchemeRun",
    "Trajectory",
    "default_record_times",
    "init_run",
    "run_trajectory",
    "step",
]

DRAWS_PER_STEP = 7
STREAM_SCHEME = 0
STREAM_OPTIMIZER = 1


class RunCompleteError(RuntimeError):
    """Raised when stepping a run that already reached ``total_steps``."""


@dataclass(frozen=True)
class SchemeConfig:
    n: int
    geometry: Geometry
    total_steps: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry.parse(self.geometry))
        if self.n < 2:
            raise ValueError("the scheme needs n >= 2 qubits")
        if self.total_steps < 0:
            raise ValueError("total_steps must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a non-negative 64-bit integer")


class SchemeRun:
    """One realization of the scheme; mutable, single-threaded."""

    def __init__(self, config: SchemeConfig, run_index: int = 0):
        self.config = config
        self.run_index = run_index
        self._rng = make_rng(config.seed, run_index, STREAM_SCHEME)
        self.initial_state = sample_random_product_state(self._rng, config.n)
        self.current_state = self.initial_state.copy()
        self.t = 0
        self.pairs = candidate_pairs(config.n, config.geometry)
        # [two-qubit gates, single-qubit gates] applied so far
        self.gate_counts = np.zeros(2, dtype=np.int64)
        self.last_pair: tuple[int, int] | None = None

    def step(self) -> "SchemeRun":
        """Advance by one step; the pair used is kept in ``last_pair``."""
        if self.t >= self.config.total_steps:
            raise RunCompleteError(f"run already completed {self.config.total_steps} steps")
        draws = self._rng.random((1, DRAWS_PER_STEP))
        self.last_pair = pair_from_uniform(self.pairs, draws[0, 0])
        _kernels.evolve(self.current_state, self.pairs, draws, self.gate_counts)
        self.t += 1
        return self

    def advance(self, steps: int) -> "SchemeRun":
        """Advance by ``steps`` steps at once; same result as calling :meth:`step` repeatedly."""
        if steps < 0 or self.t + steps > self.config.total_steps:
            raise RunCompleteError(
                f"cannot advance {steps} steps from t={self.t} (total {self.config.total_steps})")
        if steps:
            draws = self._rng.random((steps, DRAWS_PER_STEP))
            _kernels.evolve(self.current_state, self.pairs, draws, self.gate_counts)
            self.last_pair = pair_from_uniform(self.pairs, draws[-1, 0])
            self.t += steps
        return self


def init_run(config: SchemeConfig, run_index: int = 0) -> SchemeRun:
    return SchemeRun(config, run_index)


def step(run: SchemeRun) -> SchemeRun:
    return run.step()


def default_record_times(total_steps: int, dense_until: int = 50, every: int = 5) -> list[int]:
    """Every step up to ``dense_until``, then every ``every``-th step, always ending at ``total_steps``."""
    times = list(range(0, min(dense_until, total_steps) + 1))
    times += list(range(dense_until + every, total_steps + 1, every))
    if times[-1] != total_steps:
        times.append(total_steps)
    return times


def _check_times(times, total_steps: int, what: str) -> np.ndarray:
    arr = np.asarray(times, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{what} must be a non-empty list")
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"{what} must be strictly increasing")
    if arr[0] < 0 or arr[-1] > total_steps:
        raise ValueError(f"{what} must lie in [0, {total_steps}]")
    return arr


@dataclass
class Trajectory:
    """K, Q and G of one run at the recorded steps; G is NaN where not evaluated."""

    times: np.ndarray
    K: np.ndarray
    Q: np.ndarray
    G: np.ndarray
    gate_counts: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=np.int64))


def run_trajectory(config: SchemeConfig, record_times, groverian_options: OptimizerOptions | None = None,
                   g_times=None, run_index: int = 0) -> Trajectory:
    """Evolve one run and record (K, Q, G) along the way.

    K and Q are recorded at every entry of ``record_times``. G is evaluated
    at ``g_times`` (a subset of ``record_times``; defaults to all of them),
    or nowhere when ``groverian_options`` is None.
    """
    times = _check_times(record_times, config.total_steps, "record_times")
    if groverian_options is None:
        g_set = set()
    elif g_times is None:
        g_set = set(times.tolist())
    else:
        g_arr = _check_times(g_times, config.total_steps, "g_times")
        g_set = set(g_arr.tolist())
        if not g_set <= set(times.tolist()):
            raise ValueError("g_times must be a subset of record_times")

    run = SchemeRun(config, run_index)
    K = np.empty(times.size)
    Q = np.empty(times.size)
    G = np.full(times.size, np.nan)
    for k, t in enumerate(times.tolist()):
        run.advance(t - run.t)
        psi = run.current_state
        K[k] = log_infidelity_K(run.initial_state, psi)
        Q[k] = average_bipartite_Q(psi)
        if t in g_set:
            rng = make_rng(config.seed, run_index, STREAM_OPTIMIZER, t)
            pm = p_max(psi, groverian_options, rng).p_max
            G[k] = -math.log(pm)
    return Trajectory(times=times, K=K, Q=Q, G=G, gate_counts=run.gate_counts.copy())
