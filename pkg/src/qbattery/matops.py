"""
Dense complex matrix algebra for small qubit registers.

Matrices are plain ``numpy`` arrays of shape ``(dim, dim)``.  Qubit 1 is the
most significant bit of a computational-basis index, so ``kron(a, b)`` puts
``a`` on qubit 1.  Qubit labels passed to :func:`partial_trace` are 1-based;
basis permutations are 0-based index arrays.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadIndex, BadPermutation, LengthMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
OFFDIAG_TOL = 1e-13
MAX_SWEEPS = 100

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class HermitianSpectrum(NamedTuple):
    """Eigenvalues sorted descending; column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    """Tensor product with ``a`` as the more significant factor."""
    return np.kron(as_square(a), as_square(b))


def kron_all(factors: Sequence) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def hermiticity_error(m) -> float:
    a = as_square(m)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


@lru_cache(maxsize=None)
def _round_robin(dim: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Each round pairs every index with exactly one partner, so the rotations
    # of a round touch disjoint rows/columns and can be applied together.
    m = dim + (dim % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < dim and q < dim:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _max_offdiag(a: np.ndarray) -> float:
    off = np.abs(a - np.diag(np.diag(a)))
    return float(off.max()) if off.size else 0.0


def eig_hermitian(m, *, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS) -> HermitianSpectrum:
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized as ``(M + M^H)/2`` and swept with complex
    Givens rotations in round-robin order until the largest off-diagonal
    magnitude drops below ``tol`` (scaled by the matrix's largest entry when
    that exceeds 1).

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``1e-10`` in max-abs norm.
    tol : float
        Off-diagonal stopping threshold.
    max_sweeps : int
        Number of full sweeps before giving up.

    Returns
    -------
    HermitianSpectrum
        Eigenvalues in descending order (stable for ties) and the unitary
        whose columns are the matching eigenvectors.

    Raises
    ------
    NotHermitian
        If ``max|M - M^H| > 1e-10``.
    NoConvergence
        If the sweep limit is reached.
    """
    a = as_square(m)
    err = hermiticity_error(a)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian: max|M - M^H| = {err:.3e}")
    a = 0.5 * (a + a.conj().T)
    dim = a.shape[0]
    u = np.eye(dim, dtype=complex)
    threshold = tol * max(1.0, float(np.max(np.abs(a))) if dim else 1.0)

    sweeps = 0
    while _max_offdiag(a) >= threshold:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for ps, qs in _round_robin(dim):
            z = a[ps, qs]
            r = np.abs(z)
            active = r > 0.0
            if not active.any():
                continue
            ps, qs, z, r = ps[active], qs[active], z[active], r[active]
            app = a[ps, ps].real
            aqq = a[qs, qs].real
            tau = (aqq - app) / (2.0 * r)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phase = np.conj(z) / r  # e^{-i arg z}
            g00, g01, g10, g11 = c, s, -s * phase, c * phase

            # A <- A G ; U <- U G
            for mat in (a, u):
                cp, cq = mat[:, ps].copy(), mat[:, qs]
                mat[:, ps] = cp * g00 + cq * g10
                mat[:, qs] = cp * g01 + cq * g11
            # A <- G^H A
            rp, rq = a[ps, :].copy(), a[qs, :]
            a[ps, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
            a[qs, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
        sweeps += 1

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return HermitianSpectrum(w[order], u[:, order])


def eigvalsh_desc(m) -> np.ndarray:
    return eig_hermitian(m).eigenvalues


def _check_keep(n: int, keep: Sequence[int]) -> list[int]:
    keep = [int(k) for k in keep]
    if not keep:
        raise BadIndex("keep must name at least one qubit")
    if len(set(keep)) != len(keep):
        raise BadIndex(f"duplicate qubit index in {keep}")
    bad = [k for k in keep if not 1 <= k <= n]
    if bad:
        raise BadIndex(f"qubit index {bad[0]} out of range 1..{n}")
    if keep != sorted(keep):
        raise BadIndex(f"qubit indices must be ascending, got {keep}")
    return keep


def partial_trace(rho, n: int, keep: Sequence[int]) -> np.ndarray:
    """Reduce an ``n``-qubit matrix onto the (1-based, ascending) qubits in ``keep``."""
    a = as_square(rho)
    if a.shape[0] != 2**n:
        raise ValueError(f"matrix dimension {a.shape[0]} is not 2**{n}")
    keep = _check_keep(n, keep)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    rows = list(letters[:n])
    cols = [rows[i] if (i + 1) not in keep else letters[n + i] for i in range(n)]
    out = [rows[k - 1] for k in keep] + [cols[k - 1] for k in keep]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(out)
    d = 2 ** len(keep)
    return np.einsum(spec, a.reshape((2,) * (2 * n))).reshape(d, d)


def check_permutation(pi: Sequence[int], dim: int | None = None) -> np.ndarray:
    p = np.asarray(pi)
    if p.ndim != 1 or (dim is not None and p.size != dim):
        raise BadPermutation(f"permutation must have length {dim}")
    if not np.issubdtype(p.dtype, np.integer):
        raise BadPermutation("permutation entries must be integers")
    if sorted(p.tolist()) != list(range(p.size)):
        raise BadPermutation(f"{p.tolist()} is not a bijection on 0..{p.size - 1}")
    return p.astype(int)


def permutation_matrix(pi: Sequence[int]) -> np.ndarray:
    """``P`` with ``P|i> = |pi[i]>``."""
    p = check_permutation(pi)
    m = np.zeros((p.size, p.size), dtype=complex)
    m[p, np.arange(p.size)] = 1.0
    return m


def transposition(dim: int, i: int, j: int) -> np.ndarray:
    """Basis permutation exchanging rows ``i`` and ``j`` (numbered from 1, like ``U_{ij}``)."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise BadIndex(f"rows {i}, {j} out of range 1..{dim}")
    p = np.arange(dim)
    p[i - 1], p[j - 1] = j - 1, i - 1
    return p


def conjugate_by_permutation(rho, pi: Sequence[int]) -> np.ndarray:
    """Return ``P rho P^H``: entry ``(i, j)`` moves to ``(pi[i], pi[j])``."""
    a = as_square(rho)
    p = check_permutation(pi, a.shape[0])
    out = np.empty_like(a)
    out[np.ix_(p, p)] = a
    return out


def is_majorized(x, y, tol: float = 1e-10) -> bool:
    """True when ``x`` is majorized by ``y`` (``x ≺ y``)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    if cx.size == 0:
        return True
    return bool(np.all(cx <= cy + tol) and abs(cx[-1] - cy[-1]) <= tol)


def unistochastic(u) -> np.ndarray:
    """Matrix of squared moduli ``|u_ij|^2``; doubly stochastic when ``u`` is unitary."""
    return np.abs(np.asarray(u)) ** 2
