"""Radial wave-optics of the real q-box: Laguerre-Gauss profiles, lens Hankel transforms,
the semi-birefringent plate, crosstalk overlaps and the disk-radius optimization.

Units and discretization
------------------------
Lengths are dimensionless with lambda*f = 1. A lens maps the near-plane radial
profile ``f(r)`` of a mode with azimuthal order ``m`` to the focal-plane profile
``F(k) = int_0^inf f(r) J_m(k r) r dr``. This transform is self-inverse.

Each azimuthal order has its own quasi-discrete Hankel grid built on the
Bessel zeros ``j_1 < ... < j_{N+1}`` of ``J_m``. With focal window ``k_max`` and
``S = j_{N+1}``:

* near-plane samples ``r_i = j_i / k_max`` with weights ``2 / (k_max^2 J_{m+1}(j_i)^2)``
* focal-plane samples ``k_i = j_i k_max / S`` with weights ``2 / ((S/k_max)^2 J_{m+1}(j_i)^2)``

In the scaled coordinates ``u_i = sqrt(w_i) f(r_i)`` the lens becomes a symmetric
orthogonal matrix ``T_ij = 2/S J_m(j_i j_j / S) / (|J_{m+1}(j_i)| |J_{m+1}(j_j)|)``,
which depends only on ``(m, N)``. Discrete power is ``sum |u_i|^2``.

A near-plane component ``(s, m)`` is stored on the grid of order ``|m + 2s|``,
the order it has after the next q-plate. A q-box keeps every component on that
grid, so q-boxes need no resampling. Waveplates change the spin but not ``m``.
They therefore move a component to another grid, which requires the
band-limited interpolation in :func:`resample`. That step is not exactly
unitary.

The unit of length for disk radii is fixed by the input: an LG_{0,2} of unit waist
at the near plane. The disk radius that balances the two failure modes is
R* ~ 2.93 in these units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np
from scipy import special
from scipy.optimize import minimize, minimize_scalar

from spinorbit.so_core import BASIS_KETS, SOKet, SOVector4, as_unitary2

DEFAULT_N = 2048
DEFAULT_K_MAX = 24.0
DEFAULT_DISK_RADIUS = 2.928


class GridMismatchError(ValueError):
    """Components that must share a grid do not."""


# ---------------------------------------------------------------------------
# Grids and transforms


@lru_cache(maxsize=16)
def _bessel_zeros(order: int, n: int) -> np.ndarray:
    z = special.jn_zeros(order, n + 1)
    z.setflags(write=False)
    return z


@lru_cache(maxsize=6)
def hankel_matrix(order: int, n: int) -> np.ndarray:
    """The orthogonal, symmetric, involutive QDHT matrix for ``(order, n)``."""
    z = _bessel_zeros(order, n)
    j, s = z[:n], z[n]
    jp = np.abs(special.jv(order + 1, j))
    t = (2.0 / s) * special.jv(order, np.outer(j, j) / s) / np.outer(jp, jp)
    t.setflags(write=False)
    return t


@dataclass(frozen=True)
class RadialGrid:
    """Quasi-discrete Hankel grid of one azimuthal order (see module docstring)."""

    order: int
    n: int = DEFAULT_N
    k_max: float = DEFAULT_K_MAX

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"grid order must be a non-negative integer, got {self.order!r}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid size must be an integer >= 2, got {self.n!r}")
        if not (self.k_max > 0 and math.isfinite(self.k_max)):
            raise ValueError(f"k_max must be positive, got {self.k_max!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k_max", float(self.k_max))

    @property
    def zeros(self) -> np.ndarray:
        return _bessel_zeros(self.order, self.n)[: self.n]

    @property
    def s(self) -> float:
        return float(_bessel_zeros(self.order, self.n)[self.n])

    @property
    def near_extent(self) -> float:
        return self.s / self.k_max

    def radii(self, plane: str = "near") -> np.ndarray:
        if plane == "near":
            return self.zeros / self.k_max
        if plane == "focal":
            return self.zeros / self.near_extent
        raise ValueError(f"plane must be 'near' or 'focal', got {plane!r}")

    def weights(self, plane: str = "near") -> np.ndarray:
        if plane not in ("near", "focal"):
            raise ValueError(f"plane must be 'near' or 'focal', got {plane!r}")
        scale = self.k_max if plane == "near" else self.near_extent
        return 2.0 / (scale**2 * special.jv(self.order + 1, self.zeros) ** 2)

    @property
    def matrix(self) -> np.ndarray:
        return hankel_matrix(self.order, self.n)

    def with_order(self, order: int) -> "RadialGrid":
        return replace(self, order=abs(int(order)))

    def fitted(self, edge: float) -> "RadialGrid":
        """A grid of the same order and size whose focal samples straddle ``edge`` symmetrically.

        The focal window is rescaled (as little as possible) so that ``edge`` lies
        halfway between two consecutive focal samples. A sharp disk of radius
        ``edge`` is then resolved without the sawtooth error of a fixed grid. Edges
        outside the sampled range return the grid unchanged.
        """
        k = self.radii("focal")
        if not (edge > k[0] and edge < k[-1]):
            return self
        z = self.zeros
        mids = 0.5 * (z[:-1] + z[1:])
        # k_max' = S * edge / mid_J; pick J making k_max' closest to the nominal one
        target = self.s * edge / self.k_max
        j = int(np.clip(np.searchsorted(mids, target), 1, len(mids) - 1))
        cand = [i for i in (j - 1, j) if 0 <= i < len(mids)]
        best = min(cand, key=lambda i: abs(self.s * edge / mids[i] - self.k_max))
        return replace(self, k_max=float(self.s * edge / mids[best]))


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples ``f(r_i)`` of a radial function on one plane of a grid."""

    grid: RadialGrid
    values: np.ndarray
    plane: str = "near"

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got {v.size}")
        if self.plane not in ("near", "focal"):
            raise ValueError(f"plane must be 'near' or 'focal', got {self.plane!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_scaled(cls, grid: RadialGrid, u: np.ndarray, plane: str = "near") -> "RadialProfile":
        return cls(grid, np.asarray(u) / np.sqrt(grid.weights(plane)), plane)

    @classmethod
    def zeros(cls, grid: RadialGrid, plane: str = "near") -> "RadialProfile":
        return cls(grid, np.zeros(grid.n, dtype=complex), plane)

    @property
    def r(self) -> np.ndarray:
        return self.grid.radii(self.plane)

    @property
    def scaled(self) -> np.ndarray:
        """Unitary coordinates ``sqrt(w_i) f(r_i)``."""
        return np.sqrt(self.grid.weights(self.plane)) * self.values

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.scaled) ** 2))

    def inner(self, other: "RadialProfile") -> complex:
        """``int conj(self) other r dr`` by the grid quadrature."""
        _require_same(self, other)
        return complex(np.vdot(self.scaled, other.scaled))

    def normalized(self) -> "RadialProfile":
        p = self.power
        if p == 0:
            raise ValueError("cannot normalize a zero profile")
        return replace(self, values=self.values / math.sqrt(p))

    def __mul__(self, c) -> "RadialProfile":
        return replace(self, values=self.values * c)

    __rmul__ = __mul__

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        _require_same(self, other)
        return replace(self, values=self.values + other.values)


def _require_same(a: RadialProfile, b: RadialProfile) -> None:
    if a.grid != b.grid or a.plane != b.plane:
        raise GridMismatchError(
            f"profiles live on different grids: order {a.grid.order}/{a.plane} (k_max {a.grid.k_max:g}) "
            f"vs order {b.grid.order}/{b.plane} (k_max {b.grid.k_max:g})"
        )


@dataclass(frozen=True)
class LGProfile:
    """Analytic Laguerre-Gauss radial function, normalized to ``int |f|^2 r dr = 1``."""

    p: int
    m: int
    waist: float = 1.0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise ValueError(f"radial index p must be a non-negative integer, got {self.p!r}")
        if int(self.m) != self.m:
            raise ValueError(f"azimuthal index m must be an integer, got {self.m!r}")
        if not (self.waist > 0 and math.isfinite(self.waist)):
            raise ValueError(f"waist must be positive, got {self.waist!r}")

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        am = abs(int(self.m))
        w = self.waist
        lognorm = 0.5 * (special.gammaln(self.p + 1) - special.gammaln(self.p + am + 1))
        x = 2 * r**2 / w**2
        return (
            (2.0 / w)
            * np.exp(lognorm)
            * (math.sqrt(2) * r / w) ** am
            * special.eval_genlaguerre(self.p, am, x)
            * np.exp(-(r**2) / w**2)
        )

    def sample(self, grid: RadialGrid, plane: str = "near", normalize: bool = True) -> RadialProfile:
        prof = RadialProfile(grid, self(grid.radii(plane)), plane)
        return prof.normalized() if normalize else prof


def lg_radial(p: int, m: int, waist: float = 1.0) -> LGProfile:
    return LGProfile(p, m, waist)


AnyProfile = Union[RadialProfile, LGProfile, Callable[[np.ndarray], np.ndarray]]


def sample_profile(profile: AnyProfile, grid: RadialGrid, plane: str = "near") -> RadialProfile:
    """Sample an analytic profile (or pass a sampled one through) and normalize discretely."""
    if isinstance(profile, RadialProfile):
        if profile.grid != grid or profile.plane != plane:
            return resample(profile, grid)
        return profile
    if isinstance(profile, LGProfile):
        return profile.sample(grid, plane)
    return RadialProfile(grid, profile(grid.radii(plane)), plane).normalized()


def hankel(profile: RadialProfile, order: Optional[int] = None) -> RadialProfile:
    """Lens transform of order ``order`` (default: the grid's order); flips the plane."""
    if order is not None:
        if order < 0:
            raise ValueError(f"transform order must be non-negative, got {order}")
        if order != profile.grid.order:
            raise GridMismatchError(f"order-{order} transform requested on an order-{profile.grid.order} grid")
    other = "focal" if profile.plane == "near" else "near"
    return RadialProfile.from_scaled(profile.grid, profile.grid.matrix @ profile.scaled, other)


def aperture(profile: RadialProfile, R: float) -> RadialProfile:
    """Multiply by the step ``Theta(R - r)`` (samples with ``r <= R`` are kept)."""
    if R < 0:
        raise ValueError(f"aperture radius must be non-negative, got {R}")
    return replace(profile, values=np.where(profile.r <= R, profile.values, 0))


@lru_cache(maxsize=16)
def _resample_matrix(src: RadialGrid, dst: RadialGrid) -> np.ndarray:
    m = src.order
    r_src = src.radii("near")
    r_dst = dst.radii("near")
    j = src.zeros
    kk = src.k_max
    jm = special.jv(m, kk * r_dst)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = 2 * r_src[None, :] * jm[:, None] / (kk * special.jv(m + 1, j)[None, :] * (r_src[None, :] ** 2 - r_dst[:, None] ** 2))
    hit = np.isclose(r_dst[:, None], r_src[None, :], rtol=1e-13, atol=0)
    a = np.where(hit, 1.0, a)
    a[hit.any(axis=1)] = np.where(hit[hit.any(axis=1)], 1.0, 0.0)
    return a


def resample(profile: RadialProfile, grid: RadialGrid) -> RadialProfile:
    """Band-limited interpolation of a near-plane profile onto another grid.

    The source samples are treated as a function band-limited to the source
    focal window. The result is exact for such functions and approximate otherwise.
    """
    if profile.plane != "near":
        raise ValueError("only near-plane profiles can be resampled")
    if grid == profile.grid:
        return profile
    return RadialProfile(grid, _resample_matrix(profile.grid, grid) @ profile.values, "near")


# ---------------------------------------------------------------------------
# Field states


def near_grid_order(spin: int, oam: int) -> int:
    return abs(oam + 2 * spin)


@dataclass(frozen=True, eq=False)
class FieldState:
    """Mode components ``(spin, oam) -> radial profile``; all in the same plane."""

    components: Mapping[SOKet, RadialProfile] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for k, prof in dict(self.components).items():
            key = k if isinstance(k, SOKet) else SOKet(*k)
            if key in comps:
                raise ValueError(f"duplicate component {key}")
            comps[key] = prof
        planes = {p.plane for p in comps.values()}
        if len(planes) > 1:
            raise ValueError("all components must be in the same plane")
        object.__setattr__(self, "components", dict(sorted(comps.items(), key=lambda kv: (-kv[0].spin, -kv[0].oam))))

    @classmethod
    def from_vector(
        cls,
        vec: SOVector4,
        profile: AnyProfile = LGProfile(0, 2, 1.0),
        n: int = DEFAULT_N,
        k_max: float = DEFAULT_K_MAX,
    ) -> "FieldState":
        """``sum_i a_i |ket_i> |phi>`` with ``phi`` sampled on each ket's near-plane grid."""
        comps = {}
        for ket, amp in zip(BASIS_KETS[vec.basis], vec.amps):
            grid = RadialGrid(near_grid_order(ket.spin, ket.oam), n, k_max)
            comps[ket] = sample_profile(profile, grid) * amp
        return cls(comps)

    @property
    def plane(self) -> Optional[str]:
        return next(iter(self.components.values())).plane if self.components else None

    @property
    def power(self) -> float:
        return float(sum(p.power for p in self.components.values()))

    def powers(self) -> dict[SOKet, float]:
        return {k: p.power for k, p in self.components.items()}

    def inner(self, other: "FieldState") -> complex:
        total = 0j
        for k, prof in self.components.items():
            if k in other.components:
                total += prof.inner(other.components[k])
        return complex(total)

    def map(self, fn) -> "FieldState":
        return FieldState({k: fn(p) for k, p in self.components.items()})

    def __mul__(self, c) -> "FieldState":
        return self.map(lambda p: p * c)

    __rmul__ = __mul__


def _merge(pairs: Iterable[tuple[SOKet, RadialProfile]]) -> FieldState:
    out: dict[SOKet, RadialProfile] = {}
    for k, p in pairs:
        out[k] = out[k] + p if k in out else p
    return FieldState(out)


def fidelity(ideal: FieldState, actual: FieldState) -> float:
    """``|<ideal|actual>|``."""
    return abs(ideal.inner(actual))


def conditional_fidelity(ideal: FieldState, actual: FieldState) -> float:
    """Fidelity of the renormalized (post-selected on transmission) state."""
    p = actual.power
    return abs(ideal.inner(actual)) / math.sqrt(p) if p > 0 else 0.0


# ---------------------------------------------------------------------------
# Optical elements acting on field states


@dataclass(frozen=True, eq=False)
class SbpSpec:
    """Semi-birefringent plate: spin unitary ``V`` on ``k <= R``, optional absorber on ``R < k < belt_outer``."""

    R: float
    V: object
    belt_outer: Optional[float] = None

    def __post_init__(self):
        if not (self.R >= 0 and math.isfinite(self.R)):
            raise ValueError(f"disk radius must be finite and >= 0, got {self.R!r}")
        object.__setattr__(self, "V", as_unitary2(self.V))
        if self.belt_outer is not None and not self.belt_outer > self.R:
            raise ValueError(f"belt_outer ({self.belt_outer}) must exceed R ({self.R})")


def qplate_field(state: FieldState) -> FieldState:
    return FieldState({SOKet(-k.spin, k.oam + 2 * k.spin): p for k, p in state.components.items()})


def sbp_apply(state: FieldState, sbp: SbpSpec) -> FieldState:
    """Apply the plate in the plane the state is in (normally the focal plane)."""
    v = sbp.V.matrix
    out: dict[SOKet, RadialProfile] = {}
    for oam in sorted({k.oam for k in state.components}):
        up = state.components.get(SOKet(1, oam))
        dn = state.components.get(SOKet(-1, oam))
        ref = up if up is not None else dn
        up = up if up is not None else RadialProfile.zeros(ref.grid, ref.plane)
        dn = dn if dn is not None else RadialProfile.zeros(ref.grid, ref.plane)
        _require_same(up, dn)
        r = ref.r
        inside = r <= sbp.R
        keep = ~inside
        if sbp.belt_outer is not None:
            keep &= r >= sbp.belt_outer
        a, b = up.values, dn.values
        new_up = np.where(inside, v[0, 0] * a + v[0, 1] * b, np.where(keep, a, 0))
        new_dn = np.where(inside, v[1, 0] * a + v[1, 1] * b, np.where(keep, b, 0))
        out[SOKet(1, oam)] = replace(up, values=new_up)
        out[SOKet(-1, oam)] = replace(dn, values=new_dn)
    return FieldState(out)


def qbox_propagate(state: FieldState, sbp: SbpSpec) -> FieldState:
    """q-plate -> lens -> plate -> lens -> q-plate on a near-plane state."""
    if state.plane not in (None, "near"):
        raise ValueError("q-box input must be a near-plane state")
    shifted = qplate_field(state)
    for k, p in shifted.components.items():
        if p.grid.order != abs(k.oam):
            raise GridMismatchError(
                f"component (s={-k.spin}, m={k.oam - 2 * (-k.spin)}) is on an order-{p.grid.order} grid; "
                f"the q-box needs order {abs(k.oam)}"
            )
    focal = shifted.map(hankel)
    masked = sbp_apply(focal, sbp)
    # drop components that are identically zero (added by the pairing in sbp_apply)
    masked = FieldState({k: p for k, p in masked.components.items() if np.any(p.values != 0) or k in focal.components})
    return qplate_field(masked.map(hankel))


def waveplate_field(state: FieldState, jones) -> FieldState:
    """Apply a spin unitary to every ``(+1, m), (-1, m)`` pair, resampling onto the new grids."""
    v = as_unitary2(jones).matrix
    out = []
    for oam in sorted({k.oam for k in state.components}):
        for s_out, row in ((1, 0), (-1, 1)):
            grid = None
            acc = None
            for s_in, col in ((1, 0), (-1, 1)):
                p = state.components.get(SOKet(s_in, oam))
                if p is None or v[row, col] == 0:
                    continue
                if grid is None:
                    ref = next(iter(state.components.values())).grid
                    grid = ref.with_order(near_grid_order(s_out, oam))
                term = resample(p, grid) * v[row, col]
                acc = term if acc is None else acc + term
            if acc is not None:
                out.append((SOKet(s_out, oam), acc))
    return _merge(out)


# ---------------------------------------------------------------------------
# Crosstalk overlaps and the swap-gate fidelity


def gamma(m: int, R: float, profile: AnyProfile = LGProfile(0, 2, 1.0), n: int = DEFAULT_N, k_max: float = DEFAULT_K_MAX) -> float:
    """Focal-plane power of the order-``m`` transform of ``profile`` inside radius ``R``.

    Analytic profiles are sampled on a grid fitted to ``R``; sampled profiles use their own grid.
    """
    if R <= 0:
        return 0.0
    if isinstance(profile, RadialProfile):
        if profile.grid.order != abs(m):
            raise GridMismatchError(f"gamma of order {m} needs an order-{abs(m)} grid")
        prof = profile
    else:
        prof = sample_profile(profile, RadialGrid(abs(m), n, k_max).fitted(R))
    focal = prof.grid.matrix @ prof.scaled
    inside = prof.grid.radii("focal") <= R
    return float(min(1.0, np.sum(np.abs(focal[inside]) ** 2)))


@dataclass(frozen=True)
class SwapInputParams:
    """Swap input ``a|0,0> + b|0,1> + c|1,0> + d|1,1>`` with real ``b = x cos theta``, ``c = x sin theta``."""

    a: complex
    d: complex
    x: float
    theta: float

    def __post_init__(self):
        total = abs(self.a) ** 2 + abs(self.d) ** 2 + self.x**2
        if abs(total - 1) > 1e-9:
            raise ValueError(f"|a|^2 + |d|^2 + x^2 must be 1, got {total}")
        if self.x < 0:
            raise ValueError("x must be non-negative")

    @classmethod
    def from_angles(cls, x2: float, theta: float, phase_a: float = 0.0, phase_d: float = 0.0, split: float = 0.5) -> "SwapInputParams":
        rest = 1.0 - x2
        return cls(
            a=math.sqrt(rest * split) * complex(math.cos(phase_a), math.sin(phase_a)),
            d=math.sqrt(rest * (1 - split)) * complex(math.cos(phase_d), math.sin(phase_d)),
            x=math.sqrt(x2),
            theta=theta,
        )

    @property
    def b(self) -> float:
        return self.x * math.cos(self.theta)

    @property
    def c(self) -> float:
        return self.x * math.sin(self.theta)

    def vector(self) -> SOVector4:
        return SOVector4([self.a, self.b, self.c, self.d], "natural")


def swap_fidelity(params: SwapInputParams, g0: float, g4: float) -> float:
    x2 = params.x**2
    return abs(1 - x2 * (1 - math.sin(2 * params.theta)) * (1 - g0) - (1 - x2) * g4)


def _swap_f(x2, theta, g0, g4):
    return np.abs(1 - x2 * (1 - np.sin(2 * theta)) * (1 - g0) - (1 - x2) * g4)


def worst_case_from_gammas(g0: float, g4: float) -> float:
    """Closed-form minimum of the swap fidelity over all inputs.

    The fidelity is the modulus of a function linear in ``x^2``, so the minimum
    is at ``x^2 = 0`` (value ``1 - g4``), at ``x^2 = 1`` with ``sin 2 theta = -1``
    (value ``|2 g0 - 1|``), or at an interior zero, which exists when ``g0 < 1/2``.
    """
    return float(min(1 - g4, max(0.0, 2 * g0 - 1)))


def worst_case_grid_search(g0: float, g4: float, n_x: int = 201, n_theta: int = 361) -> float:
    """Brute-force minimum over a dense ``(x^2, theta)`` grid, refined locally."""
    x2 = np.linspace(0, 1, n_x)[:, None]
    th = np.linspace(0, 2 * math.pi, n_theta, endpoint=False)[None, :]
    f = _swap_f(x2, th, g0, g4)
    i, j = np.unravel_index(np.argmin(f), f.shape)
    res = minimize(
        lambda z: float(_swap_f(z[0], z[1], g0, g4)),
        x0=[x2[i, 0], th[0, j]],
        bounds=[(0, 1), (th[0, j] - 0.1, th[0, j] + 0.1)],
        method="L-BFGS-B",
        options={"ftol": 1e-15, "gtol": 1e-12},
    )
    return float(min(f[i, j], res.fun))


def worst_case_complex(g0: float, g4: float, n: int = 41) -> float:
    """Minimum over complex ``b, c`` as well, by grid search with local refinement.

    With ``|b| = x cos(alpha)``, ``|c| = x sin(alpha)`` and relative phase ``phi``
    the overlap is ``(1 - x^2)(1 - g4) + x^2 g0 + 2 (1 - g0) Re(conj(b) c)``.
    """

    def f(x2, alpha, phi):
        re_bc = x2 * np.cos(alpha) * np.sin(alpha) * np.cos(phi)
        return np.abs((1 - x2) * (1 - g4) + x2 * g0 + 2 * (1 - g0) * re_bc)

    x2 = np.linspace(0, 1, n)[:, None, None]
    alpha = np.linspace(0, math.pi / 2, n)[None, :, None]
    phi = np.linspace(0, 2 * math.pi, 2 * n)[None, None, :]
    vals = f(x2, alpha, phi)
    i, j, k = np.unravel_index(np.argmin(vals), vals.shape)
    start = [x2[i, 0, 0], alpha[0, j, 0], phi[0, 0, k]]
    res = minimize(
        lambda z: float(f(*z)),
        x0=start,
        bounds=[(0, 1), (0, math.pi / 2), (start[2] - 0.5, start[2] + 0.5)],
        method="L-BFGS-B",
        options={"ftol": 1e-15, "gtol": 1e-12},
    )
    return float(min(vals[i, j, k], res.fun))


def worst_case_fidelity(R: float, profile: AnyProfile = LGProfile(0, 2, 1.0), n: int = DEFAULT_N, k_max: float = DEFAULT_K_MAX) -> float:
    return worst_case_from_gammas(gamma(0, R, profile, n, k_max), gamma(4, R, profile, n, k_max))


@dataclass(frozen=True)
class DiskOptimum:
    R_star: float
    F_min: float
    gamma0: float
    gamma4: float
    sweep: tuple  # rows (R, gamma0, gamma4, F_min), ascending R


def sweep_table(profile: AnyProfile, radii, n: int = DEFAULT_N, k_max: float = DEFAULT_K_MAX) -> list[tuple[float, float, float, float]]:
    rows = []
    for R in np.asarray(radii, dtype=float):
        g0 = gamma(0, R, profile, n, k_max)
        g4 = gamma(4, R, profile, n, k_max)
        rows.append((float(R), g0, g4, worst_case_from_gammas(g0, g4)))
    return rows


def optimize_disk_radius(
    profile: AnyProfile = LGProfile(0, 2, 1.0),
    R_range: tuple[float, float] = (0.0, 6.0),
    steps: int = 200,
    n: int = DEFAULT_N,
    k_max: float = DEFAULT_K_MAX,
) -> DiskOptimum:
    """Maximize the worst-case swap fidelity over the disk radius (scan, then golden section)."""
    lo, hi = map(float, R_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo or lo < 0:
        raise ValueError(f"invalid radius range {R_range!r}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    radii = np.linspace(lo, hi, steps) if hi > lo else np.array([lo])
    rows = sweep_table(profile, radii, n, k_max)
    f = np.array([r[3] for r in rows])
    i = int(np.argmax(f))
    best_R, best_F = rows[i][0], rows[i][3]
    if 0 < i < len(rows) - 1:

        def neg(R):
            return -worst_case_fidelity(R, profile, n, k_max)

        res = minimize_scalar(neg, bracket=(radii[i - 1], radii[i], radii[i + 1]), method="golden", tol=1e-10)
        if -res.fun > best_F and radii[i - 1] <= res.x <= radii[i + 1]:
            best_R, best_F = float(res.x), float(-res.fun)
    return DiskOptimum(
        R_star=best_R,
        F_min=best_F,
        gamma0=gamma(0, best_R, profile, n, k_max),
        gamma4=gamma(4, best_R, profile, n, k_max),
        sweep=tuple(rows),
    )


@dataclass(frozen=True, eq=False)
class IntensityProfile:
    """Intensity on a uniform radial grid, normalized to unit area under ``dr``."""

    r: np.ndarray
    intensity: np.ndarray


def focal_plane_profiles(
    profile: AnyProfile = LGProfile(0, 2, 1.0),
    r_max: float = 10.0,
    points: int = 1001,
    n: int = 1024,
    k_max: float = DEFAULT_K_MAX,
) -> dict[str, IntensityProfile]:
    """Focal-plane intensities of the order-0 and order-4 transforms of ``profile``."""
    out = {}
    k = np.linspace(0, r_max, points)
    for m in (0, 4):
        prof = sample_profile(profile, RadialGrid(m, n, k_max))
        w = prof.grid.weights("near")
        field_k = special.jv(m, np.outer(k, prof.r)) @ (w * prof.values)
        inten = np.abs(field_k) ** 2
        area = np.trapezoid(inten, k) if hasattr(np, "trapezoid") else np.trapz(inten, k)
        out[f"m{m}"] = IntensityProfile(k, inten / area)
    return out
