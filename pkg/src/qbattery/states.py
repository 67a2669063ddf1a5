"""
Battery states: n-qubit X-states, general density matrices and the named
families used throughout the package (Bell-diagonal, noisy GHZ).

An :class:`XState` keeps only its diagonal and the upper half of its
anti-diagonal, ``anti[k] = rho[k, 2**n - 1 - k]`` (0-based), which makes the
2x2 block structure of its spectrum explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import matops
from .errors import BadBeta, BadTrace, BlockNotPSD, InvalidState, NegativeDiagonal, NotAState

PROB_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class XState:
    """Validated n-qubit X-state (diagonal plus anti-diagonal)."""

    n: int
    diag: np.ndarray
    anti: np.ndarray

    def __post_init__(self):
        diag = np.array(self.diag, dtype=float).reshape(-1)
        anti = np.array(self.anti, dtype=complex).reshape(-1)
        n = int(self.n)
        if n < 1:
            raise InvalidState(f"qubit count must be positive, got {n}")
        dim = 2**n
        if diag.size != dim:
            raise InvalidState(f"diag has length {diag.size}, expected {dim}")
        if anti.size != dim // 2:
            raise InvalidState(f"anti has length {anti.size}, expected {dim // 2}")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(anti))):
            raise InvalidState("state has non-finite entries")
        total = float(np.sum(diag))
        if abs(total - 1.0) > TRACE_TOL:
            raise BadTrace(f"diagonal sums to {total!r}, expected 1")
        neg = np.flatnonzero(diag < -PROB_TOL)
        if neg.size:
            i = int(neg[0])
            raise NegativeDiagonal(f"diag[{i}] = {diag[i]!r} is negative")
        for k in range(dim // 2):
            j = dim - 1 - k
            if diag[k] * diag[j] < abs(anti[k]) ** 2 - PROB_TOL:
                raise BlockNotPSD(
                    f"block ({k}, {j}) is not positive: "
                    f"diag[{k}]*diag[{j}] = {diag[k] * diag[j]!r} < |anti[{k}]|^2 = {abs(anti[k]) ** 2!r}"
                )
        diag.setflags(write=False)
        anti.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "anti", anti)

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def is_incoherent(self) -> bool:
        return not np.any(self.anti)

    def matrix(self) -> np.ndarray:
        """Dense ``2**n`` matrix with Hermitian completion."""
        dim = self.dim
        m = np.diag(self.diag.astype(complex))
        k = np.arange(dim // 2)
        m[k, dim - 1 - k] = self.anti
        m[dim - 1 - k, k] = np.conj(self.anti)
        return m

    def __eq__(self, other):
        if not isinstance(other, XState):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.diag, other.diag)
            and np.array_equal(self.anti, other.anti)
        )

    def __repr__(self):
        return f"XState(n={self.n}, diag={self.diag.tolist()}, anti={self.anti.tolist()})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated general n-qubit density matrix."""

    n: int
    m: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        m = matops.as_square(self.m).copy()
        if m.shape[0] != 2**n:
            raise InvalidState(f"matrix dimension {m.shape[0]} is not 2**{n}")
        err = matops.hermiticity_error(m)
        if err > matops.HERMITIAN_TOL:
            raise InvalidState(f"matrix is not Hermitian (max|M - M^H| = {err:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise BadTrace(f"trace is {tr!r}, expected 1")
        lo = float(matops.eigvalsh_desc(m)[-1])
        if lo < -PSD_TOL:
            raise NotAState(f"minimum eigenvalue {lo!r} is negative")
        m.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return 2**self.n

    def matrix(self) -> np.ndarray:
        return np.array(self.m)


State = Union[XState, DensityMatrix]


def make_x_state(n: int, diag, anti) -> XState:
    return XState(n, diag, anti)


def bell_diagonal(a1: float, a2: float, a3: float) -> XState:
    """``(I⊗I + a1 XX + a2 YY + a3 ZZ) / 4``."""
    lam = bell_diagonal_eigenvalues(a1, a2, a3)
    if np.any(lam < -PROB_TOL):
        raise NotAState(f"Bell-diagonal coefficients ({a1}, {a2}, {a3}) give eigenvalues {lam.tolist()}")
    diag = np.array([1 + a3, 1 - a3, 1 - a3, 1 + a3]) / 4
    anti = np.array([(a1 - a2) / 4, (a1 + a2) / 4])
    return XState(2, diag, anti)


def bell_diagonal_eigenvalues(a1: float, a2: float, a3: float) -> np.ndarray:
    return np.array([
        (1 - a1 - a2 - a3) / 4,
        (1 - a1 + a2 + a3) / 4,
        (1 + a1 - a2 + a3) / 4,
        (1 + a1 + a2 - a3) / 4,
    ])


def ghz_white_noise(n: int, beta: float) -> XState:
    """``beta |GHZ><GHZ| + (1 - beta) I / 2**n``."""
    if n < 2:
        raise InvalidState(f"noisy GHZ needs n >= 2, got {n}")
    if not 0.0 <= beta <= 1.0:
        raise BadBeta(f"beta must lie in [0, 1], got {beta}")
    dim = 2**n
    diag = np.full(dim, (1 - beta) / dim)
    diag[0] += beta / 2
    diag[-1] += beta / 2
    anti = np.zeros(dim // 2, dtype=complex)
    anti[0] = beta / 2
    return XState(n, diag, anti)


def dephase(rho: State) -> XState:
    """Keep the diagonal, drop every coherence."""
    n = n_qubits(rho)
    diag = rho.diag if isinstance(rho, XState) else np.diag(as_matrix(rho)).real
    return XState(n, np.array(diag), np.zeros(2 ** (n - 1), dtype=complex))


def block_eigenvalues(a: float, b: float, z: complex) -> tuple[float, float]:
    """Eigenvalues (high, low) of ``[[a, z], [conj(z), b]]``."""
    mid = 0.5 * (a + b)
    half = 0.5 * np.sqrt((a - b) ** 2 + 4 * abs(z) ** 2)
    return mid + half, mid - half


def x_state_spectrum(x: XState) -> np.ndarray:
    """Closed-form eigenvalues of an X-state, sorted descending."""
    dim = x.dim
    k = np.arange(dim // 2)
    a = x.diag[k]
    b = x.diag[dim - 1 - k]
    mid = 0.5 * (a + b)
    half = 0.5 * np.sqrt((a - b) ** 2 + 4 * np.abs(x.anti) ** 2)
    return np.sort(np.concatenate([mid + half, mid - half]))[::-1]


def to_dense(x: XState) -> DensityMatrix:
    return DensityMatrix(x.n, x.matrix())


def from_dense_x(rho, n: int | None = None) -> XState:
    """Read an X-state back from a dense matrix; raises if it has entries off the X pattern."""
    m = matops.as_square(rho)
    dim = m.shape[0]
    if n is None:
        n = int(round(np.log2(dim)))
    if dim != 2**n:
        raise InvalidState(f"matrix dimension {dim} is not 2**{n}")
    mask = np.eye(dim, dtype=bool) | np.fliplr(np.eye(dim, dtype=bool))
    if np.any(np.abs(m[~mask]) > PSD_TOL):
        raise InvalidState("matrix is not an X-state")
    k = np.arange(dim // 2)
    return XState(n, np.diag(m).real, m[k, dim - 1 - k])


def spectrum(rho) -> np.ndarray:
    """Descending eigenvalues of an X-state (closed form) or any other state (Jacobi)."""
    if isinstance(rho, XState):
        return x_state_spectrum(rho)
    if isinstance(rho, DensityMatrix):
        return matops.eigvalsh_desc(rho.m)
    return matops.eigvalsh_desc(rho)


def n_qubits(rho) -> int:
    if isinstance(rho, (XState, DensityMatrix)):
        return rho.n
    dim = matops.as_square(rho).shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise InvalidState(f"dimension {dim} is not a power of two")
    return n


def as_matrix(rho) -> np.ndarray:
    if isinstance(rho, (XState, DensityMatrix)):
        return rho.matrix()
    return matops.as_square(rho)


def ex2_state(k: int) -> XState:
    """The three incoherent 3-qubit states used as counterexamples (k = 1, 2, 3)."""
    diags = {
        1: (8, 7, 2, 1, 4, 3, 6, 5),
        2: (8, 7, 4, 3, 2, 1, 6, 5),
        3: (8, 4, 7, 3, 6, 2, 5, 1),
    }
    if k not in diags:
        raise ValueError(f"no built-in counterexample state {k}")
    return XState(3, np.array(diags[k], dtype=float) / 36, np.zeros(4))
