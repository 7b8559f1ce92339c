"""JSON serialization for quantum groups, Cayley tables and states.

Complex numbers are always stored as ``[re, im]`` pairs; rank-3 tensors as
sparse triplet lists ``[i, j, k, re, im]``.  Floats go through ``repr``
round-tripping, so decimal fidelity exceeds 15 significant digits.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .cayley import CayleyTable
from .core import FiniteQuantumGroup, StructuralError
from .states import State


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _vector_out(v) -> list:
    return [_pair(z) for z in np.asarray(v)]


def _vector_in(data, n, name) -> np.ndarray:
    if len(data) != n:
        raise StructuralError(f"{name}: expected {n} entries, got {len(data)}")
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128)


def _matrix_out(m) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def _matrix_in(data, n, name) -> np.ndarray:
    if len(data) != n or any(len(row) != n for row in data):
        raise StructuralError(f"{name}: expected {n}x{n} matrix")
    return np.array(
        [[complex(re, im) for re, im in row] for row in data], dtype=np.complex128
    )


def _tensor_out(t) -> list:
    t = np.asarray(t)
    items = []
    for (i, j, k), z in np.ndenumerate(t):
        if z != 0:
            items.append([int(i), int(j), int(k), z.real, z.imag])
    return items


def _tensor_in(items, n, name) -> np.ndarray:
    t = np.zeros((n, n, n), dtype=np.complex128)
    for entry in items:
        if len(entry) != 5:
            raise StructuralError(f"{name}: triplet entries must be [i,j,k,re,im]")
        i, j, k, re, im = entry
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise StructuralError(f"{name}: index out of range in {entry}")
        t[int(i), int(j), int(k)] = complex(re, im)
    return t


def qg_to_dict(qg: FiniteQuantumGroup) -> dict:
    return {
        "dim": qg.dim,
        "mult": _tensor_out(qg.mult),
        "comult": _tensor_out(qg.comult),
        "unit": _vector_out(qg.unit),
        "counit": _vector_out(qg.counit),
        "haar": _vector_out(qg.haar),
        "star": _matrix_out(qg.star),
        "antipode": _matrix_out(qg.antipode),
        "tol": qg.tol,
    }


def qg_from_dict(data: dict) -> FiniteQuantumGroup:
    try:
        n = int(data["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"missing or bad 'dim' field: {exc}") from exc
    required = ("mult", "comult", "unit", "counit", "haar", "star", "antipode")
    missing = [key for key in required if key not in data]
    if missing:
        raise StructuralError(f"missing fields: {missing}")
    return FiniteQuantumGroup(
        dim=n,
        mult=_tensor_in(data["mult"], n, "mult"),
        comult=_tensor_in(data["comult"], n, "comult"),
        unit=_vector_in(data["unit"], n, "unit"),
        counit=_vector_in(data["counit"], n, "counit"),
        haar=_vector_in(data["haar"], n, "haar"),
        star=_matrix_in(data["star"], n, "star"),
        antipode=_matrix_in(data["antipode"], n, "antipode"),
        tol=float(data.get("tol", 1e-9)),
    )


def cayley_to_dict(ct: CayleyTable) -> dict:
    return {
        "order": ct.order,
        "table": [int(x) for x in ct.table.ravel()],
        "identity": ct.identity,
        "inverse": [int(x) for x in ct.inverse],
    }


def cayley_from_dict(data: dict) -> CayleyTable:
    n = int(data["order"])
    flat = data["table"]
    if len(flat) != n * n:
        raise ValueError(f"table must have {n * n} row-major entries")
    ct = CayleyTable(np.array(flat, dtype=np.int64).reshape(n, n))
    if "identity" in data and int(data["identity"]) != ct.identity:
        raise ValueError("declared identity does not match the table")
    if "inverse" in data and [int(x) for x in data["inverse"]] != list(ct.inverse):
        raise ValueError("declared inverses do not match the table")
    return ct


def content_hash(qg: FiniteQuantumGroup) -> str:
    """Stable digest of the structure tensors (rounded to 12 decimals)."""
    h = hashlib.sha256()
    h.update(str(qg.dim).encode())
    for arr in (qg.mult, qg.comult, qg.unit, qg.counit, qg.haar, qg.star, qg.antipode):
        h.update(np.ascontiguousarray(np.round(arr, 12)).tobytes())
    return h.hexdigest()


def state_to_dict(state: State) -> dict:
    return {"coeffs": _vector_out(state.coeffs), "qg_hash": content_hash(state.qg)}


def state_from_dict(data: dict, qg: FiniteQuantumGroup, check_hash: bool = True) -> State:
    coeffs = _vector_in(data["coeffs"], qg.dim, "coeffs")
    if check_hash and "qg_hash" in data and data["qg_hash"] != content_hash(qg):
        raise ValueError(
            "state was serialized against a different quantum group "
            "(content hash mismatch)"
        )
    return State(qg, coeffs)


def save_json(path, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
