"""Synthesis of arbitrary U(4) targets as universal-gate parameters, plus the preset gate library."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.linalg import cossin

from spinorbit.optics import (
    DEFAULT_CONVENTION,
    BlockConvention,
    UugParams,
    blocks_of,
    ideal_qbox,
    unitary_to_blocks,
    uug_forward,
)
from spinorbit.so_core import (
    PAULI,
    Basis,
    NonUnitaryError,
    Unitary4,
    distance_up_to_global_phase,
    global_phase,
    unitarity_residual,
)

RECOMPOSITION_TOL = 1e-9
TARGET_TOL = 1e-10


class RecompositionError(RuntimeError):
    """The recovered parameters do not reproduce the target within tolerance."""


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    params: UugParams
    recomposition_error: float
    convention: str


def decompose(target: Unitary4, convention: Union[str, BlockConvention] = DEFAULT_CONVENTION) -> SynthesisResult:
    """Find (V1, VR, VL, V2) whose universal gate equals ``target`` exactly (no phase slack).

    With the cosine-sine decomposition of the block matrix,

        [[A, B], [C, D]] = diag(U1, U2) [[cos, -sin], [sin, cos]] diag(W1, W2),

    the parameters follow in closed form: VR = U1 e^{i theta} W1, VL = U1 e^{-i theta} W1,
    V1 = W1^dagger W2 and V2 = U2 U1^dagger. No division by the sines is needed, so
    degenerate targets (A unitary, A = 0, repeated singular values) need no special care.
    """
    if not isinstance(target, Unitary4):
        target = Unitary4(target)
    res = unitarity_residual(target.matrix)
    if res > TARGET_TOL:
        raise NonUnitaryError(f"target is not unitary (residual {res:.3e})")
    convention = BlockConvention(convention)
    s = unitary_to_blocks(target, convention)
    (u1, u2), theta, (w1, w2) = cossin(s, p=2, q=2, separate=True)
    ep = np.exp(1j * theta)
    vr = (u1 * ep) @ w1
    vl = (u1 * ep.conj()) @ w1
    v1 = w1.conj().T @ w2
    v2 = u2 @ u1.conj().T
    params = UugParams(v1, vr, vl, v2)
    err = float(np.linalg.norm(blocks_of(params) - s))
    if not err <= RECOMPOSITION_TOL:
        raise RecompositionError(f"recomposition error {err:.3e} exceeds {RECOMPOSITION_TOL:g}")
    return SynthesisResult(params, err, convention.value)


# ---------------------------------------------------------------------------
# Presets

PRESET_NAMES = ("swap", "cnot_spin", "cnot_oam", "hadamard4", "bell_analyzer")


def _perm(order) -> np.ndarray:
    m = np.zeros((4, 4))
    for j, i in enumerate(order):
        m[i, j] = 1.0
    return m


_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_CNOT_SPIN = _perm([0, 1, 3, 2])

CANONICAL = {
    "swap": _perm([0, 2, 1, 3]),
    "cnot_spin": _CNOT_SPIN,
    "cnot_oam": _perm([0, 3, 2, 1]),
    "hadamard4": np.kron(_H, _H),
    # maps the Bell basis onto the natural product basis
    "bell_analyzer": np.kron(_H, np.eye(2)) @ _CNOT_SPIN,
}


@dataclass(frozen=True, eq=False)
class GatePreset:
    name: str
    params: Union[UugParams, None]
    qbox_V: Union[np.ndarray, None]
    canonical_matrix: Unitary4
    description: str = ""

    @property
    def is_single_qbox(self) -> bool:
        return self.params is None

    def elements(self) -> list[dict]:
        from spinorbit.optics import uug_element_sequence

        if self.is_single_qbox:
            return [{"type": "qbox", "V": self.qbox_V}]
        return uug_element_sequence(self.params)


def preset(name: str) -> GatePreset:
    i, x, y, z = PAULI["I"], PAULI["X"], PAULI["Y"], PAULI["Z"]
    canonical = None
    if name in CANONICAL:
        canonical = Unitary4(CANONICAL[name], Basis.NATURAL)
    if name == "swap":
        return GatePreset(name, None, x, canonical, "single q-box with a half-wave plate")
    if name == "cnot_spin":
        p = UugParams(V1=-1j * x, VR=i, VL=z, V2=1j * x)
        return GatePreset(name, p, None, canonical, "spin-controlled NOT")
    if name == "cnot_oam":
        p = UugParams(V1=-1j * i, VR=i, VL=z, V2=1j * i)
        return GatePreset(name, p, None, canonical, "OAM-controlled NOT")
    if name == "hadamard4":
        p = UugParams(V1=y, VR=i, VL=x, V2=1j * z)
        return GatePreset(name, p, None, canonical, "Hadamard on both qubits")
    if name == "bell_analyzer":
        b = (i - 1j * y) / np.sqrt(2)
        p = UugParams(V1=i, VR=b, VL=b, V2=1j * y)
        return GatePreset(name, p, None, canonical, "Bell basis to product basis")
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


@dataclass(frozen=True)
class PresetReport:
    name: str
    matches: bool
    phase: complex
    convention: str
    distance: float
    candidates: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def summary(self) -> str:
        status = "match" if self.matches else "no match"
        extra = "".join(f" {k}={v}" for k, v in self.checks.items())
        ph = self.phase
        return (
            f"{self.name}: {status} convention={self.convention} distance={self.distance:.3e} "
            f"phase={ph.real:+.6f}{ph.imag:+.6f}j{extra}"
        )


def _schmidt_coefficients(v: np.ndarray) -> np.ndarray:
    """Schmidt coefficients of a natural-basis vector (spin x OAM)."""
    return np.linalg.svd(np.asarray(v).reshape(2, 2), compute_uv=False)


def maximally_entangled(v: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.allclose(_schmidt_coefficients(v), 1 / np.sqrt(2), atol=tol))


def is_permutation_up_to_phase(m: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.abs(np.asarray(m))
    return bool(np.all((np.abs(a - 1) < tol) | (a < tol)) and np.allclose(a.sum(axis=0), 1, atol=tol))


def candidate_matrices(p: GatePreset) -> dict[str, np.ndarray]:
    """The preset's natural-basis matrix under every block convention and action reading."""
    out = {}
    for conv in BlockConvention:
        if p.is_single_qbox:
            m = ideal_qbox(p.qbox_V, Basis.NATURAL).matrix
        else:
            m = uug_forward(p.params, Basis.NATURAL, conv).matrix
        out[f"{conv.value}/column"] = m
        out[f"{conv.value}/row"] = m.T
    return out


def verify_preset(name: str, tol: float = 1e-9) -> PresetReport:
    """Compare a preset against its textbook matrix under all candidate conventions.

    A non-match is a valid outcome; the report then carries the property checks
    (permutation structure, entangled columns) instead.
    """
    p = preset(name)
    canon = p.canonical_matrix.matrix
    cands = candidate_matrices(p)
    dists = {k: distance_up_to_global_phase(m, canon) for k, m in cands.items()}
    default_key = f"{DEFAULT_CONVENTION.value}/column"
    if dists[default_key] <= tol:
        key = default_key
    else:
        key = min(dists, key=lambda k: (dists[k], k))
    m = cands[default_key]
    checks = {"unitary": unitarity_residual(m) <= 1e-12}
    if name.startswith("cnot") or name == "swap":
        checks["permutation"] = is_permutation_up_to_phase(m)
    if name == "bell_analyzer":
        # the inverse maps product kets to its columns; they must all be Bell-like
        inv = m.conj().T
        checks["entangled_columns"] = all(maximally_entangled(inv[:, j]) for j in range(4))
    return PresetReport(
        name=name,
        matches=dists[key] <= tol,
        phase=global_phase(cands[key], canon),
        convention=key,
        distance=dists[key],
        candidates=dists,
        checks=checks,
    )
