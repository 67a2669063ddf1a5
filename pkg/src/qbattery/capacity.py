"""
Battery capacity: the gap between the highest and lowest energy reachable
from a state by unitary evolution, its dephasing lower bound, and a
majorization/Schur-convexity check.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import matops
from .errors import LengthMismatch, NotSorted, SchurViolation
from .hamiltonians import BatteryHamiltonian, hamiltonian_spectrum
from .states import dephase, n_qubits, spectrum

SORT_TOL = 1e-12
NORM_TOL = 1e-10
FORM_TOL = 1e-12
COMPARE_TOL = 1e-10


def _descending(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size > 1 and np.any(np.diff(v) > SORT_TOL):
        raise NotSorted(f"{name} must be sorted descending")
    return v


def capacity(lam, eps) -> float:
    """
    Capacity from a descending state spectrum ``lam`` and descending energy levels ``eps``.

    Evaluates ``sum_i lam_i (eps_i - eps_{d-1-i})`` and cross-checks it against
    the equivalent ``sum_i eps_i (lam_i - lam_{d-1-i})``.
    """
    lam = _descending(lam, "state spectrum")
    eps = _descending(eps, "energy spectrum")
    if lam.size != eps.size:
        raise LengthMismatch(f"spectrum lengths differ: {lam.size} vs {eps.size}")
    if abs(lam.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"state spectrum sums to {lam.sum()!r}, expected 1")
    by_levels = float(np.dot(lam, eps - eps[::-1]))
    by_weights = float(np.dot(eps, lam - lam[::-1]))
    scale = max(1.0, float(np.abs(eps).max(initial=0.0)))
    if abs(by_levels - by_weights) > FORM_TOL * scale:
        raise ArithmeticError(f"capacity forms disagree: {by_levels!r} vs {by_weights!r}")
    return by_levels


def capacity_of(rho, h: BatteryHamiltonian) -> float:
    if n_qubits(rho) != h.n:
        raise LengthMismatch(f"state has {n_qubits(rho)} qubits, Hamiltonian {h.n}")
    return capacity(spectrum(rho), hamiltonian_spectrum(h))


def capacity_lower_bound(rho, h: BatteryHamiltonian) -> float:
    """Capacity of the dephased state; never exceeds :func:`capacity_of`."""
    return capacity_of(dephase(rho), h)


class SchurReport(NamedTuple):
    majorized: bool
    c_rho: float
    c_varrho: float


def schur_pair_check(rho, varrho, h: BatteryHamiltonian) -> SchurReport:
    """Compare capacities of two states; raise if ``rho ≺ varrho`` but ``C(rho) > C(varrho)``."""
    s_rho, s_var = spectrum(rho), spectrum(varrho)
    majorized = matops.is_majorized(s_rho, s_var, COMPARE_TOL)
    c_rho, c_var = capacity_of(rho, h), capacity_of(varrho, h)
    if majorized and c_rho > c_var + COMPARE_TOL:
        raise SchurViolation(f"C(rho) = {c_rho!r} exceeds C(varrho) = {c_var!r} for a majorized pair")
    return SchurReport(majorized, c_rho, c_var)
