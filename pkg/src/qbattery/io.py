"""
JSON schemas for states and Hamiltonians, and CSV helpers.

X-state:  ``{"n": int, "diag": [real, ...], "anti": [[re, im], ...]}``
dense:    ``{"n": int, "dense": [[[re, im], ...], ...]}``
Hamiltonian: ``{"eps": [real, ...], "gamma": real}``
"""

from __future__ import annotations

import csv
import io as _io
import json
from typing import Iterable, Sequence

import numpy as np

from .hamiltonians import BatteryHamiltonian
from .states import DensityMatrix, XState


class SchemaError(ValueError):
    """Input is structurally malformed; the message names the offending field."""


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in v
    ):
        return complex(v[0], v[1])
    raise SchemaError(f"{where}: expected [re, im], got {v!r}")


def _real(v, where: str) -> float:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise SchemaError(f"{where}: expected a number, got {v!r}")


def _field(obj: dict, key: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(f"missing field '{key}'")
    return obj[key]


def state_from_json(obj: dict) -> XState | DensityMatrix:
    """Build a state; :class:`SchemaError` for bad structure, InvalidState for bad physics."""
    n = _field(obj, "n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"field 'n': expected a positive integer, got {n!r}")
    if "dense" in obj:
        rows = obj["dense"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise SchemaError("field 'dense': expected a list of rows")
        m = np.array([[_complex(v, f"dense[{i}][{j}]") for j, v in enumerate(r)]
                      for i, r in enumerate(rows)], dtype=complex) if rows else np.zeros((0, 0))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SchemaError("field 'dense': matrix is not square")
        return DensityMatrix(n, m)
    diag = _field(obj, "diag")
    anti = _field(obj, "anti")
    if not isinstance(diag, list):
        raise SchemaError("field 'diag': expected a list")
    if not isinstance(anti, list):
        raise SchemaError("field 'anti': expected a list")
    d = [_real(v, f"diag[{i}]") for i, v in enumerate(diag)]
    a = [_complex(v, f"anti[{i}]") for i, v in enumerate(anti)]
    return XState(n, d, a)


def state_to_json(rho: XState | DensityMatrix) -> dict:
    if isinstance(rho, XState):
        return {
            "n": rho.n,
            "diag": [float(v) for v in rho.diag],
            "anti": [[float(z.real), float(z.imag)] for z in rho.anti],
        }
    return {
        "n": rho.n,
        "dense": [[[float(z.real), float(z.imag)] for z in row] for row in rho.m],
    }


def hamiltonian_from_json(obj: dict) -> BatteryHamiltonian:
    eps = _field(obj, "eps")
    if not isinstance(eps, list):
        raise SchemaError("field 'eps': expected a list")
    gamma = _real(obj.get("gamma", 0.0), "gamma")
    return BatteryHamiltonian(tuple(_real(v, f"eps[{i}]") for i, v in enumerate(eps)), gamma)


def hamiltonian_to_json(h: BatteryHamiltonian) -> dict:
    return {"eps": list(h.eps), "gamma": h.gamma}


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def fmt(x) -> str:
    """17 significant digits, '.' separator regardless of locale."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()
