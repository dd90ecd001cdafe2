"""Run element pipelines on ideal four-level states or on full radial field states."""

from __future__ import annotations

from dataclasses import dataclass

from spinorbit.jsonio import InputError, element_from_json
from spinorbit.optics import WAVEPLATE_KINDS, WaveplateSpec, compose_elements, jones_matrix
from spinorbit.radial import (
    DEFAULT_DISK_RADIUS,
    DEFAULT_K_MAX,
    DEFAULT_N,
    AnyProfile,
    FieldState,
    LGProfile,
    SbpSpec,
    qbox_propagate,
    waveplate_field,
)
from spinorbit.so_core import SOVector4


@dataclass(frozen=True)
class Pipeline:
    """Elements listed in the order the photon meets them."""

    elements: tuple

    @classmethod
    def from_json(cls, doc) -> "Pipeline":
        from spinorbit.synthesis import PRESET_NAMES, preset

        if not isinstance(doc, dict):
            raise InputError("pipeline: expected a JSON object")
        if "preset" in doc:
            name = doc["preset"]
            if name not in PRESET_NAMES:
                raise InputError(f"pipeline.preset: unknown preset {name!r}")
            # preset sequences are in operator-product order
            return cls(tuple(reversed(preset(name).elements())))
        els = doc.get("elements")
        if not isinstance(els, list):
            raise InputError("pipeline.elements: expected a list")
        order = doc.get("order", "beam")
        if order not in ("beam", "operator"):
            raise InputError(f"pipeline.order: expected 'beam' or 'operator', got {order!r}")
        parsed = [element_from_json(e, f"pipeline.elements[{i}]") for i, e in enumerate(els)]
        if order == "operator":
            parsed.reverse()
        return cls(tuple(parsed))


def run_ideal(pipeline: Pipeline, state: SOVector4) -> SOVector4:
    u = compose_elements(pipeline.elements, state.basis, order="beam")
    return u @ state


@dataclass(frozen=True, eq=False)
class RadialResult:
    output: FieldState
    ideal: FieldState
    fidelity: float
    transmission: float

    def component_table(self) -> list[tuple[int, int, float]]:
        return [(k.spin, k.oam, p) for k, p in self.output.powers().items()]


def run_radial(
    pipeline: Pipeline,
    state: SOVector4,
    profile: AnyProfile = LGProfile(0, 2, 1.0),
    n: int = DEFAULT_N,
    k_max: float = DEFAULT_K_MAX,
    default_R: float = DEFAULT_DISK_RADIUS,
) -> RadialResult:
    field = FieldState.from_vector(state, profile, n, k_max)
    for el in pipeline.elements:
        kind = el["type"]
        if kind == "qbox":
            sbp = SbpSpec(el.get("R", default_R), el["V"], el.get("belt_outer"))
            field = qbox_propagate(field, sbp)
        elif kind in WAVEPLATE_KINDS:
            angle = el.get("angle", 0.0) if kind != "retarder" else el.get("angle")
            field = waveplate_field(field, jones_matrix(WaveplateSpec(kind, angle, el.get("delta"))))
        else:  # pragma: no cover - rejected by the parser
            raise InputError(f"unknown element type {kind!r}")
    ideal_vec = run_ideal(pipeline, state)
    ideal = FieldState.from_vector(ideal_vec, profile, n, k_max)
    fid = abs(ideal.inner(field))
    return RadialResult(field, ideal, float(fid), field.power)
