"""Simulation and synthesis of single-photon spin-orbit (polarization x OAM) ququart gates."""

from spinorbit.so_core import (
    Basis,
    NonUnitaryError,
    SOKet,
    SOVector4,
    Unitary2,
    Unitary4,
    basis_permutation,
    distance_up_to_global_phase,
    lift_oam,
    lift_spin,
    state_fidelity,
)
from spinorbit.optics import (
    BlockConvention,
    SamUugParams,
    UugParams,
    WaveplateSpec,
    ideal_qbox,
    jones_matrix,
    qplate_map,
    sam_uug,
    transmittance_estimate,
    uug_element_sequence,
    uug_forward,
)
from spinorbit.synthesis import SynthesisResult, decompose, preset, verify_preset

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "BlockConvention",
    "NonUnitaryError",
    "SOKet",
    "SOVector4",
    "SamUugParams",
    "SynthesisResult",
    "Unitary2",
    "Unitary4",
    "UugParams",
    "WaveplateSpec",
    "basis_permutation",
    "decompose",
    "distance_up_to_global_phase",
    "ideal_qbox",
    "jones_matrix",
    "lift_oam",
    "lift_spin",
    "preset",
    "qplate_map",
    "sam_uug",
    "state_fidelity",
    "transmittance_estimate",
    "uug_element_sequence",
    "uug_forward",
    "verify_preset",
]
