"""Basis bookkeeping, state/operator containers and operator lifts for the 4D spin-orbit space.

Two orderings of the four kets with OAM m = +/-2 are used throughout:

    logical:  |00> = |+1, +2>   |01> = |-1, -2>   |10> = |-1, +2>   |11> = |+1, -2>
    natural:  |0,0> = |+1, +2>  |0,1> = |+1, -2>  |1,0> = |-1, +2>  |1,1> = |-1, -2>

where |s, m> carries spin s (circular handedness) and OAM m. In the natural
ordering the first bit is the spin (0 <-> s = +1) and the second bit the OAM
(0 <-> m = +2).

Operator convention
-------------------
All matrices act on amplitude column vectors, ``a_out = M @ a_in``. Writing the
action on a row of kets, ``(|e_1>, ..., |e_n>) -> (|e_1>, ..., |e_n>) M``, gives
the same matrix ``M``: the image of ket ``j`` is column ``j`` of ``M``. Matrices
written in the row-of-kets form can therefore be used directly, without
transposition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

UNITARY_ATOL = 1e-12
REPAIR_ATOL = 1e-6


class NonUnitaryError(ValueError):
    """Raised when a matrix or state is too far from unitary/normalized to be repaired."""


class Basis(str, enum.Enum):
    LOGICAL = "logical"
    NATURAL = "natural"

    @classmethod
    def parse(cls, value: Union[str, "Basis"]) -> "Basis":
        if isinstance(value, Basis):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown basis {value!r}; expected 'logical' or 'natural'") from None


@dataclass(frozen=True, order=True)
class SOKet:
    """A spin-orbit ket |s, m>; any integer OAM is allowed so leakage modes fit too."""

    spin: int
    oam: int

    def __post_init__(self):
        if self.spin not in (1, -1):
            raise ValueError(f"spin must be +1 or -1, got {self.spin!r}")
        if int(self.oam) != self.oam:
            raise ValueError(f"oam must be an integer, got {self.oam!r}")
        object.__setattr__(self, "oam", int(self.oam))


BASIS_KETS: dict[Basis, tuple[SOKet, ...]] = {
    Basis.LOGICAL: (SOKet(1, 2), SOKet(-1, -2), SOKet(-1, 2), SOKet(1, -2)),
    Basis.NATURAL: (SOKet(1, 2), SOKet(1, -2), SOKet(-1, 2), SOKet(-1, -2)),
}


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def unitarity_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))


def _checked_unitary(m, shape: tuple[int, int]) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != shape:
        raise ValueError(f"expected a {shape[0]}x{shape[1]} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    res = unitarity_residual(m)
    if res > REPAIR_ATOL:
        raise NonUnitaryError(f"matrix is not unitary (residual {res:.3e})")
    if res > UNITARY_ATOL:
        # nearest unitary (polar factor)
        u, _, vh = np.linalg.svd(m)
        m = u @ vh
    return _frozen(m)


@dataclass(frozen=True, eq=False)
class Unitary2:
    """A 2x2 unitary acting on the spin basis (|+1>, |-1>) or on the OAM basis (|+2>, |-2>)."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _checked_unitary(self.matrix, (2, 2)))

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2(self.matrix @ as_unitary2(other).matrix)

    def dagger(self) -> "Unitary2":
        return Unitary2(self.matrix.conj().T)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Unitary4:
    """A 4x4 unitary on the spin-orbit space, tagged with the ordering of its basis."""

    matrix: np.ndarray
    basis: Basis = Basis.NATURAL

    def __post_init__(self):
        object.__setattr__(self, "matrix", _checked_unitary(self.matrix, (4, 4)))
        object.__setattr__(self, "basis", Basis.parse(self.basis))

    def to(self, basis: Union[str, Basis]) -> "Unitary4":
        basis = Basis.parse(basis)
        if basis == self.basis:
            return self
        p = basis_permutation(self.basis, basis).matrix
        return Unitary4(p @ self.matrix @ p.T, basis)

    def __matmul__(self, other):
        if isinstance(other, SOVector4):
            return SOVector4(self.matrix @ other.to(self.basis).amps, self.basis)
        if isinstance(other, Unitary4):
            return Unitary4(self.matrix @ other.to(self.basis).matrix, self.basis)
        return NotImplemented

    def dagger(self) -> "Unitary4":
        return Unitary4(self.matrix.conj().T, self.basis)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class SOVector4:
    """Normalized amplitudes of a spin-orbit ququart in the given basis ordering."""

    amps: np.ndarray
    basis: Basis = Basis.NATURAL

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).reshape(-1)
        if a.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got {a.size}")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > REPAIR_ATOL:
            raise NonUnitaryError(f"state is not normalized (norm {norm:.6g})")
        if abs(norm - 1.0) > UNITARY_ATOL:
            a = a / norm
        object.__setattr__(self, "amps", _frozen(a))
        object.__setattr__(self, "basis", Basis.parse(self.basis))

    @classmethod
    def ket(cls, index: int, basis: Union[str, Basis] = Basis.NATURAL) -> "SOVector4":
        a = np.zeros(4, dtype=complex)
        a[index] = 1.0
        return cls(a, basis)

    def to(self, basis: Union[str, Basis]) -> "SOVector4":
        basis = Basis.parse(basis)
        if basis == self.basis:
            return self
        return SOVector4(basis_permutation(self.basis, basis).matrix @ self.amps, basis)

    def as_dict(self) -> dict[SOKet, complex]:
        """Amplitudes keyed by the physical ket they belong to."""
        return {k: complex(a) for k, a in zip(BASIS_KETS[self.basis], self.amps)}


def as_unitary2(v) -> Unitary2:
    return v if isinstance(v, Unitary2) else Unitary2(v)


def basis_permutation(from_basis: Union[str, Basis], to_basis: Union[str, Basis]) -> Unitary4:
    """Permutation P with ``a_to = P @ a_from`` for amplitude vectors.

    The returned operator is tagged with ``to_basis``.
    """
    src = BASIS_KETS[Basis.parse(from_basis)]
    dst = BASIS_KETS[Basis.parse(to_basis)]
    p = np.zeros((4, 4))
    for j, ket in enumerate(src):
        p[dst.index(ket), j] = 1.0
    return Unitary4(p, to_basis)


def lift_spin(v, basis: Union[str, Basis] = Basis.NATURAL) -> Unitary4:
    """Embed a spin-only 2x2 unitary into the spin-orbit space."""
    v = as_unitary2(v).matrix
    basis = Basis.parse(basis)
    if basis == Basis.NATURAL:
        return Unitary4(np.kron(v, np.eye(2)), basis)
    (v11, v12), (v21, v22) = v
    m = np.array(
        [
            [v11, 0, v12, 0],
            [0, v22, 0, v21],
            [v21, 0, v22, 0],
            [0, v12, 0, v11],
        ]
    )
    return Unitary4(m, basis)


def lift_oam(u, basis: Union[str, Basis] = Basis.NATURAL) -> Unitary4:
    """Embed an OAM-only 2x2 unitary (basis |+2>, |-2>) into the spin-orbit space."""
    u = as_unitary2(u).matrix
    basis = Basis.parse(basis)
    if basis == Basis.NATURAL:
        return Unitary4(np.kron(np.eye(2), u), basis)
    (u11, u12), (u21, u22) = u
    m = np.array(
        [
            [u11, 0, 0, u12],
            [0, u22, u21, 0],
            [0, u12, u11, 0],
            [u21, 0, 0, u22],
        ]
    )
    return Unitary4(m, basis)


def state_fidelity(psi: SOVector4, phi: SOVector4) -> float:
    """|<psi|phi>|, converting ``phi`` to the basis of ``psi`` if needed."""
    phi = phi.to(psi.basis)
    return float(min(1.0, abs(np.vdot(psi.amps, phi.amps))))


def distance_up_to_global_phase(u, v) -> float:
    """min over phi of ||u - exp(i phi) v||_F.

    Both operands must be expressed in the same basis when they are Unitary4.
    """
    if isinstance(u, Unitary4) and isinstance(v, Unitary4) and u.basis != v.basis:
        raise ValueError(f"basis mismatch: {u.basis.value} vs {v.basis.value}")
    a = np.asarray(u, dtype=complex)
    b = np.asarray(v, dtype=complex)
    overlap = np.vdot(b, a)  # tr(b^dagger a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def global_phase(u, v) -> complex:
    """Unit-modulus c minimizing ||u - c v||_F (1 when the overlap vanishes)."""
    overlap = np.vdot(np.asarray(v, dtype=complex), np.asarray(u, dtype=complex))
    return complex(overlap / abs(overlap)) if abs(overlap) > 0 else 1.0 + 0j


PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
