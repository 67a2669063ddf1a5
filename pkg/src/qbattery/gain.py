"""
Redistributing capacity with basis permutations.

A global permutation unitary leaves the total capacity unchanged but can
move part of the residual capacity into the single-qubit marginals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import matops
from .capacity import capacity, capacity_of
from .distribution import equality_ordering_check, marginal_capacities
from .errors import BadArity, TooLarge
from .hamiltonians import BatteryHamiltonian, hamiltonian_spectrum, default_eps
from .states import XState, ghz_white_noise

CONSERVATION_TOL = 1e-10
TIE_TOL = 1e-12
RATIO_FLOOR = 1e-12
STRATEGIES = ("exhaustive", "sort-diagonal", "theorem-pattern")
EXHAUSTIVE_MAX_DIM = 8


@dataclass(frozen=True)
class GainResult:
    permutation: tuple[int, ...]
    marginals_before: tuple[float, ...]
    marginals_after: tuple[float, ...]
    gain: float
    ratio: float | None
    total_before: float
    total_after: float

    @property
    def rbc_before(self) -> float:
        return self.total_before - math.fsum(self.marginals_before)

    @property
    def rbc_after(self) -> float:
        return self.total_after - math.fsum(self.marginals_after)

    @property
    def rbc_fraction_after(self) -> float:
        return self.rbc_after / self.total_after if self.total_after > RATIO_FLOOR else 0.0

    def as_dict(self) -> dict:
        return {
            "permutation": list(self.permutation),
            "marginals_before": list(self.marginals_before),
            "marginals_after": list(self.marginals_after),
            "gain": self.gain,
            "ratio": self.ratio,
            "total_before": self.total_before,
            "total_after": self.total_after,
            "rbc_before": self.rbc_before,
            "rbc_after": self.rbc_after,
        }


def apply_gain_permutation(rho: XState, h: BatteryHamiltonian, pi: Sequence[int]) -> GainResult:
    """Evaluate the marginals of ``P rho P^H`` on the dense path (the image need not be an X-state)."""
    if rho.n != h.n:
        raise BadArity(f"state has {rho.n} qubits but Hamiltonian has {h.n}")
    pi = matops.check_permutation(pi, rho.dim)
    dense = rho.matrix()
    moved = matops.conjugate_by_permutation(dense, pi)
    before = marginal_capacities(dense, rho.n, h)
    after = marginal_capacities(moved, rho.n, h)
    total_before = capacity_of(rho, h)
    total_after = capacity(matops.eigvalsh_desc(moved), hamiltonian_spectrum(h))
    if abs(total_after - total_before) > CONSERVATION_TOL:
        raise ArithmeticError(
            f"total capacity changed under permutation: {total_before!r} -> {total_after!r}"
        )
    gain = math.fsum(after) - math.fsum(before)
    rbc = total_before - math.fsum(before)
    ratio = gain / rbc if rbc > RATIO_FLOOR else None
    return GainResult(tuple(int(p) for p in pi), before, after, gain, ratio, total_before, total_after)


@lru_cache(maxsize=None)
def _all_permutations(dim: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(dim))), dtype=np.int64)


def bloch_lengths(rho: XState, perms: np.ndarray) -> np.ndarray:
    """
    Single-qubit Bloch-vector lengths of ``P rho P^H`` for a batch of permutations.

    Returns an array of shape ``(len(perms), n)``.  Uses the X-structure of
    ``rho``: only the diagonal and the anti-diagonal pairs need to be tracked.
    """
    perms = np.atleast_2d(perms)
    n, dim = rho.n, rho.dim
    half = np.arange(dim // 2)
    img_lo = perms[:, half]
    img_hi = perms[:, dim - 1 - half]
    out = np.empty((perms.shape[0], n))
    for k in range(n):
        bit = 1 << (n - 1 - k)
        zero = (perms & bit) == 0
        p0 = zero.astype(float) @ rho.diag
        linked = (img_lo ^ img_hi) == bit
        # orientation: anti[a] sits at (pi(a), pi(a')); if pi(a) has the bit set it lands below the diagonal
        upper = (img_lo & bit) == 0
        coh = np.where(upper, rho.anti[None, :], np.conj(rho.anti)[None, :])
        z = np.sum(np.where(linked, coh, 0.0), axis=1)
        out[:, k] = np.sqrt((2 * p0 - 1) ** 2 + 4 * np.abs(z) ** 2)
    return out


def marginal_sums(rho: XState, h: BatteryHamiltonian, perms: np.ndarray) -> np.ndarray:
    """Sum of single-qubit capacities of ``P rho P^H`` for each permutation in ``perms``."""
    return bloch_lengths(rho, perms) @ (2.0 * np.asarray(h.eps))


def _transpositions_needed(pi: np.ndarray) -> int:
    seen = np.zeros(pi.size, dtype=bool)
    cycles = 0
    for start in range(pi.size):
        if not seen[start]:
            cycles += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = pi[j]
    return pi.size - cycles


def two_qubit_permutation(rho: XState) -> np.ndarray:
    """
    Row-swap construction for two qubits.

    Identity if the diagonal already has an equality ordering.  Otherwise the
    permutation with the fewest transpositions (then lexicographically
    first) that produces an equality-ordered diagonal without shortening
    either qubit's Bloch vector; since each qubit's capacity is ``2 eps_i``
    times that length, the gain is non-negative for every Hamiltonian.
    """
    if rho.n != 2:
        raise BadArity(f"the two-qubit construction needs n = 2, got {rho.n}")
    ident = np.arange(4)
    if equality_ordering_check(rho.diag).matches:
        return ident
    perms = _all_permutations(4)
    base = bloch_lengths(rho, ident[None, :])[0]
    lengths = bloch_lengths(rho, perms)
    best = None
    for pi, ln in zip(perms, lengths):
        new_diag = np.empty(4)
        new_diag[pi] = rho.diag
        if not equality_ordering_check(new_diag).matches:
            continue
        if np.any(ln < base - TIE_TOL):
            continue
        key = _transpositions_needed(pi)
        if best is None or key < best[0]:
            best = (key, pi)
    return ident if best is None else best[1].copy()


def sort_diagonal_permutation(rho: XState) -> np.ndarray:
    order = np.argsort(-rho.diag, kind="stable")
    pi = np.empty_like(order)
    pi[order] = np.arange(order.size)
    return pi


def corner_swap_permutation(dim: int) -> np.ndarray:
    """Exchange of basis rows 2 and ``dim``."""
    return matops.transposition(dim, 2, dim)


def optimize_gain(rho: XState, h: BatteryHamiltonian, strategy: str = "exhaustive") -> GainResult:
    if strategy == "exhaustive":
        if rho.dim > EXHAUSTIVE_MAX_DIM:
            raise TooLarge(f"exhaustive search is limited to n <= 3, got n = {rho.n}")
        perms = _all_permutations(rho.dim)
        sums = marginal_sums(rho, h, perms)
        idx = int(np.flatnonzero(sums >= sums.max() - TIE_TOL)[0])
        pi = perms[idx]
    elif strategy == "sort-diagonal":
        pi = sort_diagonal_permutation(rho)
    elif strategy == "theorem-pattern":
        pi = corner_swap_permutation(rho.dim)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    return apply_gain_permutation(rho, h, pi)


def transfer_ratio_curve(n: int, beta: float, gamma_grid: Sequence[float]) -> list[tuple[float, float | None]]:
    """Fraction of the residual capacity moved into the marginals of noisy GHZ, per ``gamma``."""
    rho = ghz_white_noise(n, beta)
    pi = corner_swap_permutation(rho.dim)
    eps = default_eps(n)
    return [(float(g), apply_gain_permutation(rho, BatteryHamiltonian(eps, g), pi).ratio)
            for g in gamma_grid]
