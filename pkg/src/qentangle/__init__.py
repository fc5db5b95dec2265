"""Random-gate entanglement growth on qubit registers.

Statevector simulation of the rotate-entangle-rotate scheme on a periodic
chain or an all-to-all register, with the average bipartite measure Q,
the logarithmic Groverian measure G and the log-infidelity K.
"""
__version__ = "0.1.0"

from .experiment import (EnsembleStats, Histogram, PolyFit, Saturation, fit_polynomial,
                         histogram_density, monte_carlo, random_q_mean, random_state_baseline,
                         saturation_study, saturation_time)
from .groverian import (DegenerateEnvironmentError, OptimizerOptions, PMaxResult, environment_vector,
                        groverian_G, p_max, p_max_oracle_grid)
from .measures import (average_bipartite_Q, fidelity, largest_eigenvalue, log_infidelity_K,
                       reduced_density_single)
from .sampling import (Geometry, candidate_pairs, haar_rotation, make_rng, sample_haar_single_qubit,
                       sample_pair, sample_random_product_state)
from .scheme import SchemeConfig, SchemeRun, Trajectory, init_run, run_trajectory, step
from .statevector import (apply_controlled_phase, apply_single_qubit_gate, basis_state, inner_product,
                          product_state)
