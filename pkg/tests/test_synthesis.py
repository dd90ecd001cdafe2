from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import haar
from spinorbit.optics import BlockConvention, blocks_to_unitary, uug_forward
from spinorbit.so_core import PAULI, Basis, NonUnitaryError, Unitary4
from spinorbit.synthesis import (
    PRESET_NAMES,
    decompose,
    maximally_entangled,
    preset,
    verify_preset,
)


def _roundtrip_error(target: Unitary4, convention=BlockConvention.LOGICAL) -> float:
    res = decompose(target, convention)
    back = uug_forward(res.params, target.basis, convention).matrix
    return float(np.linalg.norm(back - target.matrix))


def block_target(a, b, c, d) -> Unitary4:
    s = np.block([[a, b], [c, d]])
    return blocks_to_unitary(s, "natural")


def degenerate_targets(rng) -> list[Unitary4]:
    """Block-diagonal, A = 0, repeated singular values and near-degenerate targets."""
    out = []
    for _ in range(4):
        a, d = haar(2, rng), haar(2, rng)
        out.append(block_target(a, np.zeros((2, 2)), np.zeros((2, 2)), d))  # A unitary, W = 0
        b, c = haar(2, rng), haar(2, rng)
        out.append(block_target(np.zeros((2, 2)), b, c, np.zeros((2, 2))))  # A = 0
    # equal cosines: A = cos(t) * unitary
    for t in (0.3, 1e-9, np.pi / 2 - 1e-9):
        u1, u2, w1, w2 = (haar(2, rng) for _ in range(4))
        cs, sn = np.cos(t) * np.eye(2), np.sin(t) * np.eye(2)
        s = np.block([[u1, np.zeros((2, 2))], [np.zeros((2, 2)), u2]]) @ np.block([[cs, -sn], [sn, cs]]) @ np.block(
            [[w1, np.zeros((2, 2))], [np.zeros((2, 2)), w2]]
        )
        out.append(blocks_to_unitary(s, "natural"))
    # one zero sine, one nonzero
    th = np.diag([0.0, 0.8])
    s = np.block([[np.diag(np.cos(np.diag(th))), -np.diag(np.sin(np.diag(th)))], [np.diag(np.sin(np.diag(th))), np.diag(np.cos(np.diag(th)))]])
    out.append(blocks_to_unitary(s, "natural"))
    out.append(Unitary4(np.eye(4)))
    return out


def test_identity_decomposes():
    res = decompose(Unitary4(np.eye(4)))
    assert res.recomposition_error <= 1e-12
    assert res.convention == "logical"


def test_block_diagonal_oracle():
    rng = np.random.default_rng(21)
    a, d = haar(2, rng), haar(2, rng)
    t = block_target(a, np.zeros((2, 2)), np.zeros((2, 2)), d)
    res = decompose(t)
    p = res.params
    np.testing.assert_allclose(p.VR.matrix, p.VL.matrix, atol=1e-12)
    np.testing.assert_allclose(0.5 * (p.VR.matrix + p.VL.matrix), a, atol=1e-12)
    np.testing.assert_allclose(p.V2.matrix @ p.VR.matrix @ p.V1.matrix, d, atol=1e-12)
    assert _roundtrip_error(t) <= 1e-12


def test_haar_and_degenerate_round_trip():
    rng = np.random.default_rng(22)
    targets = [Unitary4(haar(4, rng)) for _ in range(100)] + degenerate_targets(rng)
    assert len(targets) >= 110
    errors = [_roundtrip_error(t) for t in targets]
    assert max(errors) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), conv=st.sampled_from(list(BlockConvention)), basis=st.sampled_from(["logical", "natural"]))
def test_round_trip_any_convention(seed, conv, basis):
    rng = np.random.default_rng(seed)
    t = Unitary4(haar(4, rng), basis)
    res = decompose(t, conv)
    assert res.recomposition_error <= 1e-9
    assert _roundtrip_error(t, conv) <= 1e-9
    for v in (res.params.VR, res.params.VL):
        assert np.max(np.abs(v.matrix @ v.matrix.conj().T - np.eye(2))) <= 1e-12


def test_decompose_is_deterministic():
    t = Unitary4(haar(4, np.random.default_rng(23)))
    a, b = decompose(t), decompose(t)
    for name in ("V1", "VR", "VL", "V2"):
        assert np.array_equal(getattr(a.params, name).matrix, getattr(b.params, name).matrix)


def test_decompose_rejects_non_unitary():
    m = np.eye(4, dtype=complex)
    m[0, 0] = 1 + 1e-8
    with pytest.raises(NonUnitaryError):
        decompose(_raw(m))


def _raw(m):
    """Bypass the container's own repair to hand decompose a slightly non-unitary matrix."""
    u = object.__new__(Unitary4)
    object.__setattr__(u, "matrix", m)
    object.__setattr__(u, "basis", Basis.NATURAL)
    return u


def test_preset_parameters():
    assert preset("swap").is_single_qbox
    np.testing.assert_array_equal(preset("swap").qbox_V, PAULI["X"])
    b = preset("bell_analyzer").params
    expected = (np.eye(2) - 1j * PAULI["Y"]) / np.sqrt(2)
    np.testing.assert_allclose(b.VL.matrix, expected)
    np.testing.assert_allclose(b.VR.matrix, expected)
    canon = preset("cnot_spin").canonical_matrix.matrix
    np.testing.assert_array_equal(canon, np.eye(4)[:, [0, 1, 3, 2]])
    with pytest.raises(KeyError):
        preset("toffoli")
    assert len(PRESET_NAMES) == 5


@pytest.mark.parametrize("name", ["swap", "cnot_spin", "cnot_oam", "hadamard4"])
def test_presets_match_under_default_convention(name):
    r = verify_preset(name)
    assert r.matches and r.convention == "logical/column"
    assert r.distance <= 1e-9
    assert abs(abs(r.phase) - 1) < 1e-12


def test_cnot_spin_depends_on_convention():
    r = verify_preset("cnot_spin")
    assert r.candidates["natural_spin/column"] > 1
    assert r.candidates["natural_oam/column"] > 1


def test_bell_analyzer_report():
    r = verify_preset("bell_analyzer")
    assert not r.matches  # documented deviation from (H x I) CNOT
    assert r.checks["unitary"] and r.checks["entangled_columns"]


def test_maximally_entangled_helper():
    assert maximally_entangled(np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert not maximally_entangled(np.array([1, 0, 0, 0]))
