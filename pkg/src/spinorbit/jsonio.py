"""JSON encoding of matrices, states and synthesis results.

Complex numbers are ``[re, im]`` pairs; plain real numbers are accepted on input.
Floats are written with Python's shortest round-trip representation, so decoding
reproduces every double exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from spinorbit.so_core import Basis, SOVector4, Unitary2, Unitary4


class InputError(ValueError):
    """Malformed or invalid input document; the message names the offending field."""


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(v, where: str) -> complex:
    if isinstance(v, bool):
        raise InputError(f"{where}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise InputError(f"{where}: expected a number or [re, im], got {v!r}")


def encode_matrix(m) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def decode_matrix(v, shape: tuple[int, int], where: str) -> np.ndarray:
    if not isinstance(v, list) or len(v) != shape[0]:
        raise InputError(f"{where}: expected {shape[0]} rows")
    out = np.empty(shape, dtype=complex)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise InputError(f"{where}[{i}]: expected {shape[1]} entries")
        for j, z in enumerate(row):
            out[i, j] = decode_complex(z, f"{where}[{i}][{j}]")
    return out


def _basis(doc: dict, default, where: str) -> Basis:
    try:
        return Basis.parse(doc.get("basis", default))
    except ValueError as exc:
        raise InputError(f"{where}.basis: {exc}") from None


def _require_dict(doc, where: str) -> dict:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a JSON object")
    return doc


def unitary2_to_json(u) -> list:
    return encode_matrix(np.asarray(u))


def unitary2_from_json(v, where: str = "V") -> Unitary2:
    m = decode_matrix(v, (2, 2), where)
    try:
        return Unitary2(m)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def unitary4_to_json(u: Unitary4) -> dict:
    return {"basis": u.basis.value, "matrix": encode_matrix(u.matrix)}


def unitary4_from_json(doc, default_basis: Basis = Basis.NATURAL, where: str = "target") -> Unitary4:
    doc = _require_dict(doc, where)
    if "matrix" not in doc:
        raise InputError(f"{where}.matrix: missing")
    m = decode_matrix(doc["matrix"], (4, 4), f"{where}.matrix")
    basis = _basis(doc, default_basis, where)
    try:
        return Unitary4(m, basis)
    except ValueError as exc:
        raise InputError(f"{where}.matrix: {exc}") from None


def vector_to_json(v: SOVector4) -> dict:
    return {"basis": v.basis.value, "amplitudes": [encode_complex(a) for a in v.amps]}


def vector_from_json(doc, default_basis: Basis = Basis.NATURAL, where: str = "state") -> SOVector4:
    doc = _require_dict(doc, where)
    amps = doc.get("amplitudes")
    if not isinstance(amps, list) or len(amps) != 4:
        raise InputError(f"{where}.amplitudes: expected a list of 4 complex numbers")
    a = [decode_complex(z, f"{where}.amplitudes[{i}]") for i, z in enumerate(amps)]
    basis = _basis(doc, default_basis, where)
    try:
        return SOVector4(a, basis)
    except ValueError as exc:
        raise InputError(f"{where}.amplitudes: {exc}") from None


def synthesis_to_json(res) -> dict:
    p = res.params
    return {
        "convention": res.convention,
        "recomposition_error": res.recomposition_error,
        "params": {name: unitary2_to_json(getattr(p, name)) for name in ("V1", "VR", "VL", "V2")},
    }


def element_to_json(el: dict) -> dict:
    out: dict[str, Any] = {"type": el["type"]}
    for key in ("angle", "delta", "R", "belt_outer"):
        if el.get(key) is not None:
            out[key] = float(el[key])
    if "V" in el:
        out["V"] = unitary2_to_json(el["V"])
    return out


def element_from_json(doc, where: str) -> dict:
    doc = _require_dict(doc, where)
    kind = doc.get("type")
    if kind not in ("qwp", "hwp", "retarder", "qbox"):
        raise InputError(f"{where}.type: expected qwp, hwp, retarder or qbox, got {kind!r}")
    el: dict[str, Any] = {"type": kind}
    for key in ("angle", "delta", "R", "belt_outer"):
        if key in doc and doc[key] is not None:
            val = doc[key]
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not np.isfinite(val):
                raise InputError(f"{where}.{key}: expected a finite number, got {val!r}")
            el[key] = float(val)
    if kind == "retarder" and "delta" not in el:
        raise InputError(f"{where}.delta: a retarder needs delta")
    if kind == "retarder" and "angle" not in doc:
        el["angle"] = None
    if kind == "qbox":
        if "V" not in doc:
            raise InputError(f"{where}.V: missing")
        el["V"] = unitary2_from_json(doc["V"], f"{where}.V")
        if el.get("R") is not None and el["R"] < 0:
            raise InputError(f"{where}.R: must be non-negative")
        if el.get("belt_outer") is not None and el["belt_outer"] <= el.get("R", 0.0):
            raise InputError(f"{where}.belt_outer: must exceed R")
    return el


def _format(obj, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and any(isinstance(v, (list, dict)) for v in obj):
        if all(isinstance(v, list) and not any(isinstance(w, (list, dict)) for w in v) for v in obj):
            # a matrix row of [re, im] pairs stays on one line
            return json.dumps(obj, allow_nan=False)
        if all(isinstance(v, dict) and not any(isinstance(w, (list, dict)) for w in v.values()) for v in obj):
            items = [pad + json.dumps(v, allow_nan=False) for v in obj]
            return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
        items = [pad + _format(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, allow_nan=False)


def dumps(obj) -> str:
    """Indented JSON with complex pairs and matrix rows kept on single lines."""
    return _format(obj, 0) + "\n"


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
