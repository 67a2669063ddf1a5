"""Capacity distribution of multi-qubit quantum-battery X-states."""

from .capacity import capacity, capacity_lower_bound, capacity_of, schur_pair_check
from .distribution import (
    CapacityReport,
    capacity_report,
    candidate_relation_slack,
    critical_gamma,
    equality_ordering_check,
    exact_incoherent_slack,
    genuine_bounds,
    monogamy_audit,
    three_qubit_relations,
)
from .gain import GainResult, apply_gain_permutation, optimize_gain, two_qubit_permutation, transfer_ratio_curve
from .hamiltonians import BatteryHamiltonian, build_hamiltonian, hamiltonian_spectrum, default_eps
from .matops import conjugate_by_permutation, eig_hermitian, is_majorized, kron, partial_trace
from .states import DensityMatrix, XState, bell_diagonal, dephase, ghz_white_noise, make_x_state, x_state_spectrum

__version__ = "0.1.0"
