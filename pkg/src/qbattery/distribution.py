"""
How capacity distributes over the qubits of an X-state.

Marginal capacities are always taken with respect to the interaction-free
Hamiltonian of the retained qubits; the interaction only enters the
capacity of the whole register.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy import optimize

from . import matops
from .capacity import capacity, capacity_of
from .errors import BadArity, BadLength, NotViolatedAtZero
from .hamiltonians import BatteryHamiltonian, hamiltonian_spectrum, subsystem_hamiltonian
from .sampling import random_hamiltonian, random_x_state
from .states import XState, dephase, x_state_spectrum

SLACK_TOL = 1e-10
RECHECK_BAND = 1e-6
GAMMA_XTOL = 1e-9

T5_LABELS = ("T5-AB|C", "T5-AC|B", "T5-BC|A")
EX2_LABELS = ("EX2-1", "EX2-2", "EX2-3")


@dataclass(frozen=True)
class CapacityReport:
    total: float
    marginals: tuple[float, ...]
    rbc: float
    rbc_ic: float
    rbc_c: float

    @property
    def lower_bound(self) -> float:
        return self.total - self.rbc_c

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "marginals": list(self.marginals),
            "rbc": self.rbc,
            "rbc_ic": self.rbc_ic,
            "rbc_c": self.rbc_c,
        }


class MonogamyAudit(NamedTuple):
    lhs: float
    rhs: float
    slack: float
    holds: bool
    equality_case: bool


class RelationSlack(NamedTuple):
    label: str
    lhs: float
    rhs: float
    slack: float

    def record(self, gamma: float, state: XState | None = None) -> dict:
        from .io import state_to_json

        return {
            "label": self.label,
            "gamma": gamma,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "state": state_to_json(state) if state is not None else None,
        }


class OrderingMatch(NamedTuple):
    matches: bool
    mask: int | None


def marginal_capacity(rho, n: int, h: BatteryHamiltonian, keep: Sequence[int]) -> float:
    """Capacity of the reduced state on ``keep`` under its interaction-free Hamiltonian."""
    dense = rho.matrix() if isinstance(rho, XState) else np.asarray(rho)
    reduced = matops.partial_trace(dense, n, keep)
    sub = subsystem_hamiltonian(h, keep)
    return capacity(matops.eigvalsh_desc(reduced), hamiltonian_spectrum(sub))


def marginal_capacities(rho, n: int, h: BatteryHamiltonian) -> tuple[float, ...]:
    dense = rho.matrix() if isinstance(rho, XState) else np.asarray(rho)
    return tuple(marginal_capacity(dense, n, h, [i]) for i in range(1, n + 1))


def _check_arity(rho: XState, h: BatteryHamiltonian) -> None:
    if rho.n != h.n:
        raise BadArity(f"state has {rho.n} qubits but Hamiltonian has {h.n}")


def capacity_report(rho: XState, h: BatteryHamiltonian) -> CapacityReport:
    _check_arity(rho, h)
    total = capacity_of(rho, h)
    lower = capacity_of(dephase(rho), h)
    marg = marginal_capacities(rho, rho.n, h)
    s = math.fsum(marg)
    return CapacityReport(total, marg, total - s, lower - s, total - lower)


def _recheck(slack: float, recompute) -> float:
    # small negative slack: redo in a slower, more careful order before trusting it
    if -RECHECK_BAND < slack < -SLACK_TOL:
        return recompute()
    return slack


def _careful_total(rho: XState, h: BatteryHamiltonian) -> float:
    lam = np.sort(matops.eigvalsh_desc(rho.matrix()).astype(np.longdouble))[::-1]
    eps = hamiltonian_spectrum(h).astype(np.longdouble)
    return float(np.sum(lam * (eps - eps[::-1])))


def monogamy_audit(rho: XState, h: BatteryHamiltonian) -> MonogamyAudit:
    """Total capacity against the sum of single-qubit capacities."""
    _check_arity(rho, h)
    marg = marginal_capacities(rho, rho.n, h)
    lhs = math.fsum(marg)
    rhs = capacity_of(rho, h)
    slack = _recheck(rhs - lhs, lambda: _careful_total(rho, h) - lhs)
    return MonogamyAudit(lhs, rhs, slack, slack >= -SLACK_TOL, slack <= SLACK_TOL)


def exact_incoherent_slack(diag, eps) -> Fraction:
    """
    Monogamy slack of an incoherent state at ``gamma = 0`` in rational arithmetic.

    Entries are converted with :class:`fractions.Fraction` (floats exactly, strings
    such as ``"3/10"`` as written), so equality cases come out as an exact zero.
    """
    d = [Fraction(v) for v in diag]
    e = [Fraction(v) for v in eps]
    n = len(e)
    if len(d) != 2**n:
        raise BadLength(f"diagonal length {len(d)} does not match {n} qubits")
    levels = []
    for b in range(2**n):
        levels.append(sum(ei if not (b >> (n - 1 - i)) & 1 else -ei for i, ei in enumerate(e)))
    lam = sorted(d, reverse=True)
    levels.sort(reverse=True)
    total = sum(l * (hi - lo) for l, hi, lo in zip(lam, levels, reversed(levels)))
    marg = Fraction(0)
    for i, ei in enumerate(e):
        bit = 1 << (n - 1 - i)
        p0 = sum(v for b, v in enumerate(d) if not b & bit)
        p1 = sum(v for b, v in enumerate(d) if b & bit)
        marg += 2 * ei * abs(p0 - p1)
    return total - marg


def equality_ordering_check(diag) -> OrderingMatch:
    """Look for an XOR mask ``m`` such that ``diag[i ^ m]`` is non-increasing in ``i``."""
    d = np.asarray(diag, dtype=float).reshape(-1)
    dim = d.size
    if dim < 1 or dim & (dim - 1):
        raise BadLength(f"diagonal length {dim} is not a power of two")
    idx = np.arange(dim)
    for mask in range(dim):
        if np.all(np.diff(d[idx ^ mask]) <= 1e-12):
            return OrderingMatch(True, mask)
    return OrderingMatch(False, None)


def _three_qubit_capacities(rho: XState, h: BatteryHamiltonian) -> dict:
    if rho.n != 3 or h.n != 3:
        raise BadArity(f"three-qubit relations need n = 3, got state n = {rho.n}, Hamiltonian n = {h.n}")
    dense = rho.matrix()
    caps = {keep: marginal_capacity(dense, 3, h, keep)
            for keep in [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]}
    caps["total"] = capacity_of(rho, h)
    caps["lower"] = capacity_of(dephase(rho), h)
    return caps


def _slack(label: str, lhs_terms: Sequence[float], rhs: float) -> RelationSlack:
    lhs = math.fsum(lhs_terms)
    return RelationSlack(label, lhs, rhs, rhs - lhs)


def three_qubit_relations(rho: XState, h: BatteryHamiltonian) -> list[RelationSlack]:
    """Each two-plus-one split of the register, plus the coherent residual, bounded by the total."""
    c = _three_qubit_capacities(rho, h)
    rbc_c = c["total"] - c["lower"]
    out = [
        _slack("T5-AB|C", [c[(1, 2)], c[(3,)], rbc_c], c["total"]),
        _slack("T5-AC|B", [c[(1, 3)], c[(2,)], rbc_c], c["total"]),
        _slack("T5-BC|A", [c[(2, 3)], c[(1,)], rbc_c], c["total"]),
    ]
    fixed = []
    for r in out:
        s = _recheck(r.slack, lambda r=r: _careful_total(rho, h) - r.lhs)
        fixed.append(r._replace(slack=s))
    return fixed


def candidate_relation_slack(rho: XState, h: BatteryHamiltonian) -> list[RelationSlack]:
    """Inclusion-exclusion style relations; these can and do fail."""
    c = _three_qubit_capacities(rho, h)
    return [
        _slack("EX2-1", [c[(1, 2)], c[(1, 3)], -c[(1,)]], c["total"]),
        _slack("EX2-2", [c[(1, 2)], c[(2, 3)], -c[(2,)]], c["total"]),
        _slack("EX2-3", [c[(1, 3)], c[(2, 3)], -c[(3,)]], c["total"]),
    ]


def relation_slack(rho: XState, h: BatteryHamiltonian, label: str) -> RelationSlack:
    if label in T5_LABELS:
        rels = three_qubit_relations(rho, h)
    elif label in EX2_LABELS:
        rels = candidate_relation_slack(rho, h)
    else:
        raise ValueError(f"unknown relation {label!r}")
    return next(r for r in rels if r.label == label)


def critical_gamma(
    rho: XState, relation: str, h0: BatteryHamiltonian, gamma_max: float = 10.0, steps: int = 1000
) -> float | None:
    """
    Smallest interaction strength at which a relation violated at ``gamma = 0`` stops being violated.

    The slack is scanned on a grid of ``steps`` intervals over ``[0, gamma_max]``;
    the first sign change is then refined by bisection to ``1e-9``.  Returns
    ``None`` when the relation stays violated on the whole bracket.
    """
    def slack(g: float) -> float:
        return relation_slack(rho, h0.with_gamma(g), relation).slack

    s0 = slack(0.0)
    if s0 >= -SLACK_TOL:
        raise NotViolatedAtZero(f"{relation} is not violated at gamma = 0 (slack {s0!r})")
    grid = np.linspace(0.0, gamma_max, steps + 1)
    prev = 0.0
    for g in grid[1:]:
        if slack(g) >= 0:
            return float(optimize.bisect(slack, prev, g, xtol=GAMMA_XTOL))
        prev = g
    return None


def genuine_bounds(rho: XState, h: BatteryHamiltonian) -> list[tuple[float, float]]:
    """Per-qubit interval ``[C_i, C_i + RBC]`` for the qubit's genuine capacity."""
    rep = capacity_report(rho, h)
    return [(c, c + rep.rbc) for c in rep.marginals]


# fuzz harness


@dataclass
class FuzzReport:
    n: int
    samples: int
    seed: int
    min_slack: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "ok": self.ok,
            "min_slack": dict(self.min_slack),
            "violations": list(self.violations),
        }


def _majorization_gap(diag, lam) -> float:
    cd = np.cumsum(np.sort(diag)[::-1])
    cl = np.cumsum(lam)
    return float(np.min(cl - cd))


def run_fuzz(n: int, samples: int, seed: int, gamma_max: float = 2.0) -> FuzzReport:
    """Check every distribution relation on ``samples`` random X-states.

    Relations: single-qubit monogamy, the dephasing lower bound, the
    diagonal-versus-spectrum majorization and, for ``n = 3``, the three
    two-plus-one relations.
    """
    from .io import hamiltonian_to_json, state_to_json

    rng = np.random.default_rng(seed)
    labels = ["monogamy", "lower-bound", "majorization"] + (list(T5_LABELS) if n == 3 else [])
    rep = FuzzReport(n, samples, seed, {k: math.inf for k in labels})

    def note(label, slack, rho, h):
        rep.min_slack[label] = min(rep.min_slack[label], slack)
        if slack < -SLACK_TOL:
            rep.violations.append({
                "label": label,
                "slack": slack,
                "state": state_to_json(rho),
                "hamiltonian": hamiltonian_to_json(h),
            })

    for _ in range(samples):
        rho = random_x_state(n, rng)
        h = random_hamiltonian(n, rng, gamma_max)
        audit = monogamy_audit(rho, h)
        note("monogamy", audit.slack, rho, h)
        note("lower-bound", capacity_of(rho, h) - capacity_of(dephase(rho), h), rho, h)
        note("majorization", _majorization_gap(rho.diag, x_state_spectrum(rho)), rho, h)
        if n == 3:
            for r in three_qubit_relations(rho, h):
                note(r.label, r.slack, rho, h)
    return rep
