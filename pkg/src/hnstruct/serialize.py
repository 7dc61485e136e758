"""Instance and report JSON.

An instance file looks like

    {"n": 4,
     "C": [[0, 2, ["0", "2", "0", "4"]], ...],
     "g": [["1", "0", "0", "0"], ...],
     "J": [J1, J2, J3]}

with 0-based indices, brackets ``[X_i, X_j] = sum_k c_k X_k`` listed once
for ``i < j`` and only when nonzero, and matrices acting on columns.
Rational scalars are ``"p/q"`` strings, float scalars plain numbers.  An
optional ``"meta"`` object is carried through untouched.
"""

from __future__ import annotations

import json

import numpy as np

from . import linalg
from .errors import BackendMismatchError, DimensionMismatchError, InstanceFormatError
from .frame import structure_constants
from .instances import Instance
from .linalg import FLOAT, RATIONAL

_KEYS = {"n", "C", "g", "J", "meta"}


def scalar_to_json(value, backend):
    if linalg.Backend(backend) is FLOAT:
        return float(value)
    return str(linalg.to_scalar(value, RATIONAL))


def array_to_json(arr, backend):
    arr = np.asarray(arr)
    if arr.ndim == 1:
        return [scalar_to_json(v, backend) for v in arr]
    return [array_to_json(a, backend) for a in arr]


def _scalar_from_json(value):
    # strings are exact, JSON numbers keep their own type
    if isinstance(value, bool):
        raise InstanceFormatError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, str):
        try:
            return linalg.to_scalar(value, RATIONAL)
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceFormatError(f"bad rational {value!r}") from exc
    if isinstance(value, int):
        return linalg.to_scalar(value, RATIONAL)
    if isinstance(value, float):
        return value
    raise InstanceFormatError(f"expected a number or \"p/q\" string, got {value!r}")


def _matrix(data, n, what):
    if not isinstance(data, list) or len(data) != n or any(
        not isinstance(row, list) or len(row) != n for row in data
    ):
        raise InstanceFormatError(f"{what} must be a {n}x{n} array")
    return [[_scalar_from_json(v) for v in row] for row in data]


def instance_from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object")
    missing = {"n", "C", "g", "J"} - data.keys()
    if missing:
        raise InstanceFormatError(f"missing keys: {', '.join(sorted(missing))}")
    extra = data.keys() - _KEYS
    if extra:
        raise InstanceFormatError(f"unknown keys: {', '.join(sorted(extra))}")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceFormatError(f"n must be a positive integer, got {n!r}")
    brackets = []
    if not isinstance(data["C"], list):
        raise InstanceFormatError("C must be a list of [i, j, [c...]] entries")
    for entry in data["C"]:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise InstanceFormatError(f"bad bracket entry {entry!r}")
        i, j, vec = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)):
            raise InstanceFormatError(f"bracket indices must be integers, got {entry[:2]!r}")
        if not isinstance(vec, list) or len(vec) != n:
            raise InstanceFormatError(f"bracket [{i},{j}] needs {n} components")
        brackets.append((i, j, [_scalar_from_json(v) for v in vec]))
    g = _matrix(data["g"], n, "g")
    J = data["J"]
    if not isinstance(J, list) or len(J) != 3:
        raise InstanceFormatError("J must list exactly three matrices")
    J = [_matrix(m, n, f"J{a + 1}") for a, m in enumerate(J)]
    entries = [v for _, _, vec in brackets for v in vec] + [v for row in g for v in row]
    entries += [v for m in J for row in m for v in row]
    backend = FLOAT if any(isinstance(v, float) for v in entries) else RATIONAL
    try:
        C = structure_constants(n, [(i, j, linalg.as_array(vec, backend)) for i, j, vec in brackets], backend)
    except DimensionMismatchError as exc:
        raise InstanceFormatError(str(exc)) from exc
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceFormatError("meta must be an object")
    return Instance(
        n, C, linalg.as_array(g, backend), tuple(linalg.as_array(m, backend) for m in J), dict(meta)
    )


def load_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from exc
    try:
        return instance_from_dict(data)
    except BackendMismatchError as exc:
        raise InstanceFormatError(str(exc)) from exc


def instance_to_dict(inst: Instance, backend=RATIONAL) -> dict:
    backend = linalg.Backend(backend)
    C = linalg.convert(inst.C, backend)
    brackets = []
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            if not linalg.is_zero(C[i, j]):
                brackets.append([i, j, array_to_json(C[i, j], backend)])
    out = {
        "n": inst.n,
        "C": brackets,
        "g": array_to_json(linalg.convert(inst.g, backend), backend),
        "J": [array_to_json(linalg.convert(m, backend), backend) for m in inst.J],
    }
    if inst.meta:
        out["meta"] = inst.meta
    return out


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def dump_instance(inst: Instance, backend=RATIONAL) -> str:
    return dumps(instance_to_dict(inst, backend))
