"""Seeded randomness for the random-gate scheme.

All streams are numpy ``Generator`` objects over PCG64, seeded through
``SeedSequence`` with an entropy list ``[seed, *keys]``. The keys name a
substream (run index, purpose tag, ...) so any realization can be
regenerated on its own, in any order, on any platform numpy supports.

Uniform draws are consumed as float64 via ``Generator.random``; one
uniform per random quantity, which keeps batched draws identical to
draws made one at a time.
"""
from __future__ import annotations

import enum

import numpy as np

from . import _kernels
from .statevector import product_state

__all__ = [
    "Geometry",
    "bloch_factors",
    "candidate_pairs",
    "haar_rotation",
    "make_rng",
    "pair_from_uniform",
    "sample_haar_single_qubit",
    "sample_pair",
    "sample_random_product_state",
]


class Geometry(str, enum.Enum):
    """Which qubit pairs a two-qubit gate may act on."""

    LOCAL = "local"  # periodic 1-D ring, nearest neighbours only
    NONLOCAL = "nonlocal"  # any pair

    @classmethod
    def parse(cls, value) -> "Geometry":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown geometry {value!r}; expected 'local' or 'nonlocal'") from None


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for the substream ``(seed, *keys)``."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a non-negative 64-bit integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *map(int, keys)])))


def haar_rotation(x: float, gamma1: float, gamma2: float) -> np.ndarray:
    """Single-qubit rotation built from three numbers in [0, 1).

    [[ e^{2 pi i g1} sqrt(1-x),    e^{2 pi i g2} sqrt(x)   ],
     [-e^{-2 pi i g2} sqrt(x),     e^{-2 pi i g1} sqrt(1-x)]]

    With x, g1, g2 independent and uniform this is Haar distributed on SU(2).
    """
    a, b, c, d = _kernels.u1_entries(float(x), float(gamma1), float(gamma2))
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def sample_haar_single_qubit(rng: np.random.Generator) -> np.ndarray:
    x, g1, g2 = rng.random(3)
    return haar_rotation(x, g1, g2)


def bloch_factors(uniforms) -> np.ndarray:
    """Map an (n, 2) array of uniforms to n Bloch-uniform single-qubit states.

    Column 0 sets the polar cosine 2u - 1, column 1 the azimuth 2 pi v.
    """
    u = np.asarray(uniforms, dtype=float)
    cos_theta = 2.0 * u[:, 0] - 1.0
    phi = 2.0 * np.pi * u[:, 1]
    factors = np.empty((u.shape[0], 2), dtype=np.complex128)
    factors[:, 0] = np.sqrt(np.clip(0.5 * (1.0 + cos_theta), 0.0, 1.0))
    factors[:, 1] = np.sqrt(np.clip(0.5 * (1.0 - cos_theta), 0.0, 1.0)) * np.exp(1j * phi)
    return factors


def sample_random_product_state(rng: np.random.Generator, n: int) -> np.ndarray:
    """Product of n independent Bloch-uniform qubits (2n uniforms consumed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return product_state(bloch_factors(rng.random((n, 2))))


def candidate_pairs(n: int, geometry) -> np.ndarray:
    """All pairs (i, j), i < j, admissible under ``geometry``, as an (m, 2) int array.

    The ring for n = 2 has a single bond; it is listed once.
    """
    geometry = Geometry.parse(geometry)
    if n < 2:
        raise ValueError("need at least two qubits to choose a pair")
    if geometry is Geometry.LOCAL:
        pairs = [(q, q + 1) for q in range(n - 1)]
        if n >= 3:
            pairs.append((0, n - 1))
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return np.array(pairs, dtype=np.int64)


def pair_from_uniform(pairs: np.ndarray, u: float) -> tuple[int, int]:
    k = min(int(u * len(pairs)), len(pairs) - 1)
    return int(pairs[k, 0]), int(pairs[k, 1])


def sample_pair(rng: np.random.Generator, n: int, geometry) -> tuple[int, int]:
    """Uniformly random admissible pair; consumes one uniform."""
    return pair_from_uniform(candidate_pairs(n, geometry), rng.random())
