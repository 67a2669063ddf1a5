"""Random generators for property tests and the fuzz harness.

All take an explicit ``numpy.random.Generator`` so a seed reproduces a run.
"""

from __future__ import annotations

import numpy as np

from .hamiltonians import BatteryHamiltonian
from .states import XState


def random_x_state(n: int, rng: np.random.Generator, incoherent: bool = False) -> XState:
    # flat Dirichlet diagonal; |anti| <= sqrt(d_k d_j) keeps every 2x2 block PSD
    dim = 2**n
    diag = rng.dirichlet(np.ones(dim))
    diag = diag / diag.sum()
    if incoherent:
        return XState(n, diag, np.zeros(dim // 2))
    k = np.arange(dim // 2)
    bound = np.sqrt(diag[k] * diag[dim - 1 - k])
    mag = rng.uniform(0.0, 1.0, dim // 2) * bound
    phase = np.exp(2j * np.pi * rng.uniform(size=dim // 2))
    return XState(n, diag, mag * phase)


def random_hamiltonian(
    n: int, rng: np.random.Generator, gamma_max: float = 2.0, eps_max: float = 1.0
) -> BatteryHamiltonian:
    eps = np.sort(rng.uniform(0.0, eps_max, n))[::-1]
    return BatteryHamiltonian(tuple(eps), float(rng.uniform(0.0, gamma_max)))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (x + x.conj().T)


def random_psd(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random unit-trace positive semidefinite matrix of the given rank (full by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    p = g @ g.conj().T
    return p / np.trace(p).real


def random_unitary(dim: int, rng: np.random.Generator, rotations: int | None = None) -> np.ndarray:
    """Product of random complex Givens rotations, optionally composed with a permutation."""
    u = np.eye(dim, dtype=complex)
    if dim < 2:
        return u * np.exp(2j * np.pi * rng.uniform())
    for _ in range(rotations or 3 * dim * dim):
        p, q = rng.choice(dim, size=2, replace=False)
        theta = rng.uniform(0, np.pi)
        phi, chi = rng.uniform(0, 2 * np.pi, 2)
        c, s = np.cos(theta), np.sin(theta)
        g = np.eye(dim, dtype=complex)
        g[p, p] = c * np.exp(1j * phi)
        g[p, q] = s * np.exp(1j * chi)
        g[q, p] = -s * np.exp(-1j * chi)
        g[q, q] = c * np.exp(-1j * phi)
        u = g @ u
    return u[rng.permutation(dim)]


def random_doubly_stochastic(dim: int, rng: np.random.Generator, terms: int = 6) -> np.ndarray:
    """Convex mixture of random permutation matrices (Birkhoff)."""
    w = rng.dirichlet(np.ones(terms))
    out = np.zeros((dim, dim))
    for wk in w:
        out[np.arange(dim), rng.permutation(dim)] += wk
    return out
