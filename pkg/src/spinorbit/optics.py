"""Jones-calculus optics for the spin-orbit gate: waveplates, the spin unitary stack,
the tuned q-plate, ideal q-boxes and the seven-element universal gate.

Conventions
-----------
This docstring is the single place where the optical conventions are fixed.

* Circular basis: ``|+1> = (x - i y)/sqrt(2)`` and ``|-1> = (x + i y)/sqrt(2)``,
  written in the linear (x, y) Jones basis. Spin matrices are always given in
  the ordered basis ``(|+1>, |-1>)``.
* Linear retarder with retardation ``delta`` and fast axis along x:
  ``diag(exp(+i delta/2), exp(-i delta/2))``. It is rotated to axis angle
  ``theta`` as ``R(theta) D R(-theta)``. In the circular basis this becomes::

      T(delta, theta) = cos(delta/2) I + i sin(delta/2) [[0, e^{2i theta}], [e^{-2i theta}, 0]]

  A quarter-wave plate (QWP) is ``T(pi/2, theta)`` and a half-wave plate (HWP) is
  ``T(pi, theta)``. An HWP therefore swaps ``|+1>`` and ``|-1>`` with phases
  ``i e^{-2i theta}`` and ``i e^{+2i theta}``.
* The isotropic retarder (``angle=None``) is the scalar ``exp(i delta) I``.
* The spin stack is ``sam_uug = QWP(gamma) HWP(beta) QWP(alpha) exp(i delta)``.
  The retarder acts first, then QWP(alpha), HWP(beta) and QWP(gamma).
  With this convention the three Pauli settings in ``PAULI_SETTINGS`` give ``sigma_x``,
  ``sigma_y`` and ``sigma_z`` with global phases ``-1``, ``+1`` and ``-1``.
  The opposite sign of retarder phase (the complex conjugate convention) also
  produces the Paulis, but it then needs the two inner waveplates of the
  seven-element gate at angle pi/2 rather than 0. The convention chosen here
  makes the element list with all plates at angle 0 reproduce the block
  formula.
* Operators act on amplitude column vectors. A sequence of elements is listed
  in operator-product order: the left-most element is the *last* one met by
  the photon.
* Block convention of the universal gate: the 2x2 blocks ``S_LL, S_LR, S_RL,
  S_RR`` are read in the logical basis, with L spanning ``(|00>, |01>)`` and R
  spanning ``(|10>, |11>)``. This is the only reading under which the
  element list composes to the block formula, and under which the c-NOT and
  Hadamard parameter sets produce the textbook natural-basis gates. Two
  alternative readings, with blocks indexed by the spin or by the OAM of the
  natural basis, are available through :class:`BlockConvention`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import least_squares

from spinorbit.so_core import (
    Basis,
    SOKet,
    Unitary2,
    Unitary4,
    as_unitary2,
    basis_permutation,
    distance_up_to_global_phase,
    lift_spin,
)

WAVEPLATE_KINDS = ("qwp", "hwp", "retarder")


@dataclass(frozen=True)
class WaveplateSpec:
    """A birefringent plate (``qwp``, ``hwp``) or a retarder of arbitrary ``delta``.

    A retarder with ``angle=None`` is isotropic; it only adds the phase ``exp(i delta)``.
    """

    kind: str
    angle: Optional[float] = 0.0
    delta: Optional[float] = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in WAVEPLATE_KINDS:
            raise ValueError(f"unknown waveplate kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "retarder":
            if self.delta is None or not math.isfinite(self.delta):
                raise ValueError("a retarder needs a finite delta")
            object.__setattr__(self, "delta", float(self.delta) % (2 * math.pi))
        else:
            if self.angle is None:
                raise ValueError(f"a {kind} needs an axis angle")
            object.__setattr__(self, "delta", math.pi / 2 if kind == "qwp" else math.pi)
        if self.angle is not None:
            if not math.isfinite(self.angle):
                raise ValueError("angle must be finite")
            object.__setattr__(self, "angle", float(self.angle))

    @property
    def isotropic(self) -> bool:
        return self.angle is None


def retarder_matrix(delta: float, angle: float) -> np.ndarray:
    """Circular-basis matrix of a linear retarder (see module conventions)."""
    c = math.cos(delta / 2)
    s = 1j * math.sin(delta / 2)
    e = np.exp(2j * angle)
    return np.array([[c, s * e], [s * np.conj(e), c]], dtype=complex)


def jones_matrix(w: WaveplateSpec) -> Unitary2:
    if w.isotropic:
        return Unitary2(np.exp(1j * w.delta) * np.eye(2))
    return Unitary2(retarder_matrix(w.delta, w.angle))


@dataclass(frozen=True)
class SamUugParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def sam_uug(p: SamUugParams) -> Unitary2:
    """Spin unitary of retarder(delta) -> QWP(alpha) -> HWP(beta) -> QWP(gamma)."""
    m = (
        retarder_matrix(math.pi / 2, p.gamma)
        @ retarder_matrix(math.pi, p.beta)
        @ retarder_matrix(math.pi / 2, p.alpha)
        * np.exp(1j * p.delta)
    )
    return Unitary2(m)


def sam_uug_settings(v, *, restarts: int = 8, seed: int = 0) -> SamUugParams:
    """Find plate angles and retardation realizing ``v`` (numerical least squares).

    The waveplate angles fix ``v`` up to a phase, which the isotropic retardation
    then supplies. Restarts are deterministic for a given ``seed``.
    """
    target = as_unitary2(v).matrix
    rng = np.random.default_rng(seed)

    def residual(x):
        m = retarder_matrix(math.pi / 2, x[2]) @ retarder_matrix(math.pi, x[1]) @ retarder_matrix(math.pi / 2, x[0])
        d = m - target * np.vdot(m, target).conjugate() / max(abs(np.vdot(m, target)), 1e-300)
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    best = None
    for _ in range(restarts):
        sol = least_squares(residual, rng.uniform(0, math.pi, 3), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or sol.cost < best.cost:
            best = sol
        if best.cost < 1e-24:
            break
    a, b, g = best.x
    m = retarder_matrix(math.pi / 2, g) @ retarder_matrix(math.pi, b) @ retarder_matrix(math.pi / 2, a)
    delta = float(np.angle(np.vdot(m, target))) % (2 * math.pi)
    return SamUugParams(float(a), float(b), float(g), delta)


@dataclass(frozen=True)
class QPlateSpec:
    charge: int = 1
    retardation: float = math.pi

    def __post_init__(self):
        if self.charge != 1 or not math.isclose(self.retardation, math.pi):
            raise ValueError("only tuned q-plates with charge 1 are supported")


def qplate_map(k: SOKet, plate: QPlateSpec = QPlateSpec()) -> SOKet:
    """Tuned q-plate action ``|s, m> -> |-s, m + 2s>`` (unit coefficients)."""
    return SOKet(-k.spin, k.oam + 2 * k.spin)


def ideal_qbox(v, basis: Union[str, Basis] = Basis.NATURAL) -> Unitary4:
    """Ideal q-box: ``diag(I, V)`` in the logical basis, converted to ``basis`` by permutation."""
    v = as_unitary2(v).matrix
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = v
    return Unitary4(m, Basis.LOGICAL).to(basis)


class BlockConvention(str, enum.Enum):
    """Which four kets the blocks L (first) and R (second) of the universal gate span."""

    LOGICAL = "logical"
    NATURAL_SPIN = "natural_spin"
    NATURAL_OAM = "natural_oam"


# Indices (into the basis named by the second entry) of the kets spanned by L then R.
_BLOCK_LAYOUT = {
    BlockConvention.LOGICAL: (Basis.LOGICAL, (0, 1, 2, 3)),
    BlockConvention.NATURAL_SPIN: (Basis.NATURAL, (0, 1, 2, 3)),
    BlockConvention.NATURAL_OAM: (Basis.NATURAL, (0, 2, 1, 3)),
}

DEFAULT_CONVENTION = BlockConvention.LOGICAL


@dataclass(frozen=True, eq=False)
class UugParams:
    V1: Unitary2
    VR: Unitary2
    VL: Unitary2
    V2: Unitary2

    def __post_init__(self):
        for name in ("V1", "VR", "VL", "V2"):
            object.__setattr__(self, name, as_unitary2(getattr(self, name)))

    @classmethod
    def identity(cls) -> "UugParams":
        i = np.eye(2)
        return cls(i, i, i, i)


def blocks_of(p: UugParams) -> np.ndarray:
    """The 4x4 block matrix [[S_LL, S_LR], [S_RL, S_RR]] built from the block formula."""
    v1, vr, vl, v2 = p.V1.matrix, p.VR.matrix, p.VL.matrix, p.V2.matrix
    s = np.empty((4, 4), dtype=complex)
    s[:2, :2] = 0.5 * (vr + vl)
    s[:2, 2:] = 0.5j * (vr - vl) @ v1
    s[2:, :2] = -0.5j * v2 @ (vr - vl)
    s[2:, 2:] = 0.5 * v2 @ (vr + vl) @ v1
    return s


def blocks_to_unitary(s: np.ndarray, basis, convention=DEFAULT_CONVENTION) -> Unitary4:
    layout_basis, order = _BLOCK_LAYOUT[BlockConvention(convention)]
    m = np.zeros((4, 4), dtype=complex)
    m[np.ix_(order, order)] = s
    return Unitary4(m, layout_basis).to(basis)


def unitary_to_blocks(u: Unitary4, convention=DEFAULT_CONVENTION) -> np.ndarray:
    layout_basis, order = _BLOCK_LAYOUT[BlockConvention(convention)]
    m = u.to(layout_basis).matrix
    return np.array(m[np.ix_(order, order)])


def uug_forward(
    p: UugParams,
    basis: Union[str, Basis] = Basis.NATURAL,
    convention: Union[str, BlockConvention] = DEFAULT_CONVENTION,
) -> Unitary4:
    """The universal-gate unitary in ``basis``, with blocks placed per ``convention``."""
    return blocks_to_unitary(blocks_of(p), basis, convention)


def uug_element_sequence(p: UugParams) -> list[dict]:
    """The seven elements in operator-product order (the photon meets the last one first)."""
    return [
        {"type": "qbox", "V": p.V2},
        {"type": "qwp", "angle": 0.0},
        {"type": "qbox", "V": p.VR},
        {"type": "hwp", "angle": 0.0},
        {"type": "qbox", "V": p.VL},
        {"type": "qwp", "angle": 0.0},
        {"type": "qbox", "V": p.V1},
    ]


def element_unitary(element: dict, basis: Union[str, Basis] = Basis.NATURAL) -> Unitary4:
    """4x4 matrix of one element descriptor: an ideal q-box or a spin-lifted waveplate."""
    kind = str(element.get("type", "")).lower()
    if kind == "qbox":
        if "V" not in element:
            raise ValueError("qbox element needs a 'V' matrix")
        return ideal_qbox(element["V"], basis)
    if kind in WAVEPLATE_KINDS:
        w = WaveplateSpec(kind, element.get("angle", 0.0 if kind != "retarder" else None), element.get("delta"))
        return lift_spin(jones_matrix(w), basis)
    raise ValueError(f"unknown element type {element.get('type')!r}")


def compose_elements(elements, basis: Union[str, Basis] = Basis.NATURAL, order: str = "operator") -> Unitary4:
    """Product of element matrices.

    ``order="operator"`` multiplies left to right as listed; ``order="beam"``
    lists the elements in the order the photon meets them.
    """
    if order not in ("operator", "beam"):
        raise ValueError(f"order must be 'operator' or 'beam', got {order!r}")
    elements = list(elements)
    if order == "beam":
        elements = elements[::-1]
    m = np.eye(4, dtype=complex)
    for el in elements:
        m = m @ element_unitary(el, basis).matrix
    return Unitary4(m, basis)


def sequence_phase(p: UugParams) -> complex:
    """Global phase c with compose(sequence) = c * uug_forward, for the fixed convention."""
    seq = compose_elements(uug_element_sequence(p), Basis.NATURAL).matrix
    ref = uug_forward(p, Basis.NATURAL).matrix
    ov = np.vdot(ref, seq)
    return complex(ov / abs(ov))


def transmittance_estimate(reflectance_per_surface: float, n_surfaces: int = 70) -> float:
    """Fraction transmitted through ``n_surfaces`` surfaces each reflecting ``reflectance_per_surface``."""
    rho = float(reflectance_per_surface)
    if not (0.0 <= rho < 1.0):
        raise ValueError(f"reflectance must lie in [0, 1), got {rho}")
    if int(n_surfaces) != n_surfaces or n_surfaces < 0:
        raise ValueError(f"n_surfaces must be a non-negative integer, got {n_surfaces}")
    return (1.0 - rho) ** int(n_surfaces)


PAULI_SETTINGS = {
    "X": SamUugParams(0.0, math.pi, math.pi / 2, math.pi / 2),
    "Y": SamUugParams(0.0, math.pi / 4, 0.0, math.pi / 2),
    "Z": SamUugParams(0.0, -math.pi / 4, math.pi / 2, math.pi / 2),
}


def spin_distance(u, v) -> float:
    return distance_up_to_global_phase(as_unitary2(u).matrix, as_unitary2(v).matrix)


__all__ = [
    "BlockConvention",
    "DEFAULT_CONVENTION",
    "PAULI_SETTINGS",
    "QPlateSpec",
    "SamUugParams",
    "UugParams",
    "WaveplateSpec",
    "basis_permutation",
    "blocks_of",
    "blocks_to_unitary",
    "compose_elements",
    "element_unitary",
    "ideal_qbox",
    "jones_matrix",
    "qplate_map",
    "retarder_matrix",
    "sam_uug",
    "sam_uug_settings",
    "sequence_phase",
    "spin_distance",
    "transmittance_estimate",
    "unitary_to_blocks",
    "uug_element_sequence",
    "uug_forward",
]
