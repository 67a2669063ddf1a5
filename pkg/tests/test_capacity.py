import importlib

import numpy as np
import pytest

from qbattery import matops
from qbattery.capacity import capacity, capacity_lower_bound, capacity_of, schur_pair_check
from qbattery.errors import LengthMismatch, NotSorted, SchurViolation
from qbattery.hamiltonians import BatteryHamiltonian, build_hamiltonian, hamiltonian_spectrum
from qbattery.sampling import random_doubly_stochastic, random_hamiltonian, random_unitary, random_x_state
from qbattery.states import DensityMatrix, bell_diagonal, dephase


def eigh_capacity(rho, hmat):
    """Extreme energies via numpy eigendecompositions (rearrangement inequality)."""
    lam = np.linalg.eigvalsh(rho)[::-1]
    e = np.linalg.eigvalsh(hmat)[::-1]
    return float(lam @ e - lam @ e[::-1])


def test_single_qubit():
    # pure excited-or-ground qubit: capacity 2 eps
    assert capacity([1.0, 0.0], [0.4, -0.4]) == pytest.approx(0.8)
    assert capacity([0.5, 0.5], [0.4, -0.4]) == pytest.approx(0.0)


def test_bell_diagonal_zero_interaction():
    h = BatteryHamiltonian((0.5, 0.3))
    assert capacity_of(bell_diagonal(0.5, 0.3, 0.1), h) == pytest.approx(0.68, abs=1e-15)
    assert capacity_lower_bound(bell_diagonal(0.5, 0.3, 0.1), h) == pytest.approx(0.1, abs=1e-15)


def test_validation():
    with pytest.raises(NotSorted):
        capacity([0.2, 0.8], [1, -1])
    with pytest.raises(NotSorted):
        capacity([0.8, 0.2], [-1, 1])
    with pytest.raises(LengthMismatch):
        capacity([1.0], [1, -1])
    with pytest.raises(ValueError):
        capacity([0.5, 0.4], [1, -1])


def test_ties_do_not_matter():
    # a tie in the spectrum leaves the value unchanged whichever copy is listed first
    assert capacity([0.4, 0.4, 0.2, 0.0], [1, 0.5, -0.5, -1]) == pytest.approx(2 * 0.4 + 0.4 * 1 - 0.2 * 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_eigh_oracle(n, rng):
    for _ in range(100):
        rho, h = random_x_state(n, rng), random_hamiltonian(n, rng)
        expected = eigh_capacity(rho.matrix(), build_hamiltonian(h))
        assert capacity_of(rho, h) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_unitary_invariance(n, rng):
    for _ in range(50):
        rho, h = random_x_state(n, rng), random_hamiltonian(n, rng)
        u = random_unitary(2**n, rng)
        moved = DensityMatrix(n, u @ rho.matrix() @ u.conj().T)
        assert capacity_of(moved, h) == pytest.approx(capacity_of(rho, h), abs=1e-10)


def test_nonnegative(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        assert capacity_of(random_x_state(n, rng), random_hamiltonian(n, rng)) >= -1e-12


def test_lower_bound(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        rho, h = random_x_state(n, rng), random_hamiltonian(n, rng)
        assert capacity_lower_bound(rho, h) <= capacity_of(rho, h) + 1e-10


def test_schur_on_doubly_stochastic_pairs(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        dim = 2**n
        lam = rng.dirichlet(np.ones(dim))
        q = random_doubly_stochastic(dim, rng)
        mixed = q @ lam
        rho = DensityMatrix(n, np.diag(mixed))
        varrho = DensityMatrix(n, np.diag(lam))
        rep = schur_pair_check(rho, varrho, random_hamiltonian(n, rng))
        assert rep.majorized
        assert rep.c_rho <= rep.c_varrho + 1e-10


def test_schur_violation_detected(monkeypatch):
    cap = importlib.import_module("qbattery.capacity")

    monkeypatch.setattr(cap, "capacity_of", lambda rho, h: 1.0 if rho.m[0, 0] < 0.9 else 0.0)
    with pytest.raises(SchurViolation):
        cap.schur_pair_check(DensityMatrix(1, np.diag([0.5, 0.5])), DensityMatrix(1, np.diag([1.0, 0.0])),
                             BatteryHamiltonian((0.5,)))


def test_dephased_state_of_incoherent_is_itself(rng):
    rho, h = random_x_state(3, rng, incoherent=True), random_hamiltonian(3, rng)
    assert capacity_of(dephase(rho), h) == capacity_of(rho, h)
    assert hamiltonian_spectrum(h).size == 8
