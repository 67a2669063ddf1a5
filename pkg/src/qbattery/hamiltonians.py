"""
Battery Hamiltonians ``H = sum_i eps_i Z_i + gamma X^{⊗n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import matops
from .errors import BadIndex, InvalidHamiltonian


@dataclass(frozen=True)
class BatteryHamiltonian:
    """Local energies ``eps`` (descending, non-negative) and interaction ``gamma >= 0``."""

    eps: tuple[float, ...]
    gamma: float = 0.0

    def __post_init__(self):
        eps = tuple(float(e) for e in np.atleast_1d(self.eps))
        gamma = float(self.gamma)
        if not eps:
            raise InvalidHamiltonian("eps must name at least one qubit")
        if not all(np.isfinite(eps)) or not np.isfinite(gamma):
            raise InvalidHamiltonian("non-finite Hamiltonian parameter")
        if any(e < 0 for e in eps):
            raise InvalidHamiltonian(f"local energies must be >= 0, got {eps}")
        if any(a < b for a, b in zip(eps, eps[1:])):
            raise InvalidHamiltonian(f"local energies must be sorted descending, got {eps}")
        if gamma < 0:
            raise InvalidHamiltonian(f"gamma must be >= 0, got {gamma}")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "gamma", gamma)

    @property
    def n(self) -> int:
        return len(self.eps)

    def with_gamma(self, gamma: float) -> "BatteryHamiltonian":
        return BatteryHamiltonian(self.eps, gamma)


def default_eps(n: int) -> tuple[float, ...]:
    """Default local energies: 0.5, 0.3, then 0.1 for every further qubit."""
    return (0.5, 0.3, *([0.1] * (n - 2)))[:n]


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    return matops.kron_all([op if i == site else matops.IDENTITY_2 for i in range(n)])


def build_hamiltonian(h: BatteryHamiltonian) -> np.ndarray:
    n = h.n
    out = np.zeros((2**n, 2**n), dtype=complex)
    for i, e in enumerate(h.eps):
        out += e * _site_operator(matops.SIGMA_Z, i, n)
    if h.gamma:
        out += h.gamma * matops.kron_all([matops.SIGMA_X] * n)
    return out


def bitstring_energies(eps: Sequence[float]) -> np.ndarray:
    """``E_b = sum_i eps_i (-1)^{b_i}`` for every basis index ``b`` (qubit 1 = MSB)."""
    n = len(eps)
    b = np.arange(2**n)
    bits = (b[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    return (1 - 2 * bits) @ np.asarray(eps, dtype=float)


@lru_cache(maxsize=4096)
def hamiltonian_spectrum(h: BatteryHamiltonian) -> np.ndarray:
    """Closed-form spectrum, descending (read-only array).

    ``X^{⊗n}`` couples ``|b>`` with its complement, whose energy is ``-E_b``, so
    every pair contributes ``±sqrt(E_b^2 + gamma^2)``.
    """
    e = bitstring_energies(h.eps)
    half = e[: e.size // 2]
    level = np.sqrt(half**2 + h.gamma**2)
    out = np.sort(np.concatenate([level, -level]))[::-1]
    out.setflags(write=False)
    return out


def local_hamiltonian(eps_i: float) -> np.ndarray:
    if eps_i < 0:
        raise InvalidHamiltonian(f"local energy must be >= 0, got {eps_i}")
    return eps_i * matops.SIGMA_Z


def subsystem_hamiltonian(
    h: BatteryHamiltonian, keep: Sequence[int], include_interaction: bool = False
) -> BatteryHamiltonian:
    """Restrict ``h`` to the 1-based qubits in ``keep``.

    The interaction survives only for the full register with
    ``include_interaction=True``; every marginal uses the interaction-free
    Hamiltonian of its qubits.
    """
    return _subsystem(h, tuple(keep), bool(include_interaction))


@lru_cache(maxsize=4096)
def _subsystem(h: BatteryHamiltonian, keep: tuple, include_interaction: bool) -> BatteryHamiltonian:
    keep = list(keep)
    if not keep or len(set(keep)) != len(keep) or any(not 1 <= k <= h.n for k in keep):
        raise BadIndex(f"bad qubit selection {keep} for n = {h.n}")
    keep = sorted(keep)
    full = keep == list(range(1, h.n + 1))
    gamma = h.gamma if (include_interaction and full) else 0.0
    return BatteryHamiltonian(tuple(h.eps[k - 1] for k in keep), gamma)
