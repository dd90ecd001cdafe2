from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, special

from conftest import haar
from spinorbit.radial import (
    FieldState,
    GridMismatchError,
    LGProfile,
    RadialGrid,
    SbpSpec,
    SwapInputParams,
    aperture,
    conditional_fidelity,
    focal_plane_profiles,
    gamma,
    hankel,
    lg_radial,
    optimize_disk_radius,
    qbox_propagate,
    qplate_field,
    resample,
    sbp_apply,
    swap_fidelity,
    waveplate_field,
    worst_case_complex,
    worst_case_from_gammas,
    worst_case_fidelity,
    worst_case_grid_search,
)
from spinorbit.so_core import PAULI, SOKet, SOVector4

N = 512
LG02 = LGProfile(0, 2, 1.0)


def exact_gamma(m: int, R: float) -> float:
    """gamma_m(R) for the unit-waist LG_02 input from the closed-form Hankel transform.

    H_m[r^2 e^{-r^2}](k) = k^m Gamma((m+4)/2) / (2^{m+1} m!) 1F1((m+4)/2; m+1; -k^2/4).
    """
    c = math.sqrt(1 / integrate.quad(lambda r: r**5 * math.exp(-2 * r * r), 0, np.inf)[0])

    def focal(k):
        return c * k**m * special.gamma((m + 4) / 2) / (2 ** (m + 1) * math.factorial(m)) * special.hyp1f1((m + 4) / 2, m + 1, -k * k / 4)

    return integrate.quad(lambda k: focal(k) ** 2 * k, 0, R, epsabs=1e-13, limit=200)[0]


def test_grid_weights_and_orthogonality():
    g = RadialGrid(0, N)
    assert np.all(g.weights("near") > 0) and np.all(g.weights("focal") > 0)
    t = g.matrix
    np.testing.assert_allclose(t, t.T, atol=0)
    assert np.max(np.abs(t @ t - np.eye(N))) < 1e-10
    with pytest.raises(ValueError):
        RadialGrid(-1, N)
    with pytest.raises(ValueError):
        RadialGrid(0, N, k_max=0)


@pytest.mark.parametrize("p,m", [(0, 0), (0, 2), (1, 2), (2, 4)])
def test_lg_normalization(p, m):
    f = lg_radial(p, m, 1.3)
    norm = integrate.quad(lambda r: f(r) ** 2 * r, 0, np.inf)[0]
    assert norm == pytest.approx(1.0, abs=1e-10)
    g = RadialGrid(abs(m), N)
    assert f.sample(g, normalize=False).power == pytest.approx(1.0, abs=1e-8)


def test_lg_shapes_and_orthogonality():
    g = RadialGrid(2, N)  # the quadrature is exact for functions band-limited in the order-2 transform
    lg02 = lg_radial(0, 2).sample(g, normalize=False)
    lg12 = lg_radial(1, 2).sample(g, normalize=False)
    assert abs(lg02.inner(lg12)) < 1e-6
    assert lg_radial(0, 2)(0.0) == 0.0
    with pytest.raises(ValueError):
        lg_radial(-1, 0)
    with pytest.raises(ValueError):
        lg_radial(0, 0, waist=0)


@pytest.mark.parametrize("order", [0, 4])
@pytest.mark.parametrize("profile", [LGProfile(0, 2, 1.0), LGProfile(0, 0, 1.0)])
def test_double_transform_is_identity(order, profile):
    prof = profile.sample(RadialGrid(order, N))
    back = hankel(hankel(prof, order), order)
    assert back.plane == "near"
    np.testing.assert_allclose(back.values, prof.values, atol=1e-6)
    assert hankel(prof).power == pytest.approx(prof.power, abs=1e-10)


@pytest.mark.parametrize("p", [0, 1, 2])
@pytest.mark.parametrize("m", [0, 2, 4])
def test_lg_eigenfunction_identity(p, m):
    f = lg_radial(p, m, math.sqrt(2))  # r^|m| L_p^|m|(r^2) e^{-r^2/2} up to normalization
    g = RadialGrid(m, N)
    out = hankel(f.sample(g), m)
    np.testing.assert_allclose(out.values, (-1) ** p * f.sample(g, "focal").values, atol=1e-5)


def test_hankel_order_checks():
    prof = LG02.sample(RadialGrid(0, N))
    with pytest.raises(GridMismatchError):
        hankel(prof, 4)
    with pytest.raises(ValueError):
        hankel(prof, -1)


def test_aperture_properties():
    prof = hankel(LG02.sample(RadialGrid(0, N)))
    assert aperture(prof, 0).power == 0
    np.testing.assert_array_equal(aperture(prof, prof.r[-1] + 1).values, prof.values)
    once = aperture(prof, 2.0)
    np.testing.assert_array_equal(aperture(once, 2.0).values, once.values)
    assert once.power <= prof.power
    with pytest.raises(ValueError):
        aperture(prof, -1)


def test_gamma_matches_closed_form():
    # the order-4 transform has a slow k^-6 tail; the default focal window misses ~1e-5 of it
    for m in (0, 4):
        for R in (1.0, 2.928, 4.5):
            assert gamma(m, R, LG02, n=2048) == pytest.approx(exact_gamma(m, R), abs=1e-4)
    for R in (1.0, 2.928, 4.5):
        assert gamma(4, R, LG02, n=4096, k_max=48.0) == pytest.approx(exact_gamma(4, R), abs=5e-6)


def test_grid_convergence_under_doubling():
    for m in (0, 4):
        a = gamma(m, 2.928, LG02, n=2048)
        b = gamma(m, 2.928, LG02, n=4096)
        assert abs(a - b) < 1e-4


def test_gamma_limits_and_monotonicity():
    assert gamma(0, 0.0, LG02, n=N) == 0.0
    for m in (0, 4):
        assert gamma(m, 1e3, LG02, n=N) == pytest.approx(1.0, abs=1e-4)
        vals = [gamma(m, R, LG02, n=N) for R in np.linspace(0, 8, 60)]
        assert all(0 <= v <= 1 for v in vals)
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_gamma_on_sampled_profile_uses_own_grid():
    prof = LG02.sample(RadialGrid(4, N))
    # without a fitted grid the sharp edge costs up to half a focal sample of edge density
    assert gamma(4, 2.928, prof) == pytest.approx(gamma(4, 2.928, LG02, n=N), abs=1e-2)
    with pytest.raises(GridMismatchError):
        gamma(0, 2.0, prof)


def test_fitted_grid_places_edge_between_samples():
    g = RadialGrid(0, N)
    f = g.fitted(2.928)
    k = f.radii("focal")
    j = np.searchsorted(k, 2.928)
    assert 0.5 * (k[j - 1] + k[j]) == pytest.approx(2.928, rel=1e-12)
    assert abs(f.k_max - g.k_max) / g.k_max < 0.01
    assert g.fitted(-1.0) is g and g.fitted(1e6) is g


def test_resample_is_exact_for_band_limited_input():
    src = RadialGrid(0, N)
    dst = RadialGrid(4, N)
    prof = LG02.sample(src, normalize=False)
    out = resample(prof, dst)
    np.testing.assert_allclose(out.values, LG02(dst.radii("near")), atol=1e-8)
    assert resample(prof, src) is prof


# --- field-level operations -------------------------------------------------


def random_field(rng, n=N) -> FieldState:
    """A normalized field on the 4D space with random smooth radial profiles."""
    vec = SOVector4(haar(4, rng)[:, 0])
    coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)

    def prof(r):
        return sum(c * lg_radial(p, 2, 1.0)(r) for p, c in enumerate(coeffs))

    return FieldState.from_vector(vec, prof, n=n)


def test_sbp_trivial_cases():
    rng = np.random.default_rng(31)
    state = random_field(rng)
    focal = qplate_field(state).map(hankel)
    same = sbp_apply(focal, SbpSpec(2.0, np.eye(2)))
    for k, p in focal.components.items():
        np.testing.assert_allclose(same.components[k].values, p.values)
    same = sbp_apply(focal, SbpSpec(0.0, PAULI["X"]))
    for k, p in focal.components.items():
        np.testing.assert_allclose(same.components[k].values, p.values)


def test_sbp_full_disk_flips_spin():
    g = RadialGrid(0, N)
    a = hankel(LG02.sample(g))
    state = FieldState({SOKet(1, 0): a})
    out = sbp_apply(state, SbpSpec(1e6, PAULI["X"]))
    np.testing.assert_allclose(out.components[SOKet(-1, 0)].values, a.values)
    assert out.components[SOKet(1, 0)].power == 0


def test_sbp_spec_validation():
    with pytest.raises(ValueError):
        SbpSpec(-1.0, np.eye(2))
    with pytest.raises(ValueError):
        SbpSpec(2.0, np.eye(2), belt_outer=1.0)


def test_qbox_zero_radius_is_identity():
    rng = np.random.default_rng(32)
    state = random_field(rng)
    out = qbox_propagate(state, SbpSpec(0.0, haar(2, rng)))
    for k, p in state.components.items():
        np.testing.assert_allclose(out.components[k].values, p.values, atol=1e-6)


def test_qbox_single_ket_components():
    state = FieldState.from_vector(SOVector4.ket(0), LG02, n=N)
    out = qbox_propagate(state, SbpSpec(2.928, PAULI["X"]))
    live = {k for k, p in out.components.items() if p.power > 1e-20}
    assert live == {SOKet(1, 2), SOKet(-1, 6)}


def test_qbox_matches_expansion_term_by_term():
    """Assemble the expected output of a sigma_x q-box from transform and aperture primitives."""
    rng = np.random.default_rng(33)
    amps = haar(4, rng)[:, 0]
    a, b, c, d = amps
    R = 2.5
    out = qbox_propagate(FieldState.from_vector(SOVector4(amps), LG02, n=N), SbpSpec(R, PAULI["X"]))
    phi0 = LG02.sample(RadialGrid(0, N))
    phi4 = LG02.sample(RadialGrid(4, N))
    juj0 = hankel(aperture(hankel(phi0), R))
    juj4 = hankel(aperture(hankel(phi4), R))
    expected = {
        SOKet(1, 2): (phi4 + juj4 * -1) * a,
        SOKet(-1, 6): juj4 * a,
        SOKet(-1, -2): (phi4 + juj4 * -1) * d,
        SOKet(1, -6): juj4 * d,
        SOKet(-1, 2): juj0 * b + (phi0 + juj0 * -1) * c,
        SOKet(1, -2): juj0 * c + (phi0 + juj0 * -1) * b,
    }
    for k, prof in expected.items():
        np.testing.assert_allclose(out.components[k].values, prof.values, atol=1e-6)
    extra = set(out.components) - set(expected)
    assert all(out.components[k].power < 1e-20 for k in extra)


def test_qbox_conserves_power():
    rng = np.random.default_rng(34)
    for _ in range(10):
        state = random_field(rng)
        out = qbox_propagate(state, SbpSpec(rng.uniform(0, 6), haar(2, rng)))
        assert out.power == pytest.approx(state.power, abs=1e-6)


def test_qbox_rejects_wrong_grid():
    g = RadialGrid(0, N)
    state = FieldState({SOKet(1, 2): LG02.sample(g)})  # (+1, 2) needs an order-4 grid
    with pytest.raises(GridMismatchError):
        qbox_propagate(state, SbpSpec(1.0, PAULI["X"]))


def test_waveplate_field_moves_components_between_grids():
    state = FieldState.from_vector(SOVector4.ket(0), LG02, n=N)
    out = waveplate_field(state, PAULI["X"])
    prof = out.components[SOKet(-1, 2)]
    assert prof.grid.order == 0
    assert prof.power == pytest.approx(1.0, abs=1e-6)


def test_belt_trade_off():
    R, sigma_x = 2.928, PAULI["X"]
    belts = [R + 0.2, R + 0.6, R + 1.2, R + 2.5]

    def run(vec, belt):
        state = FieldState.from_vector(vec, LG02, n=N)
        ideal = FieldState.from_vector(SOVector4(vec.amps[[0, 2, 1, 3]]), LG02, n=N)
        out = qbox_propagate(state, SbpSpec(R, sigma_x, belt))
        return out.power, conditional_fidelity(ideal, out)

    anti = SOVector4([0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0])
    for vec, improves in ((anti, True), (SOVector4.ket(0), False)):
        base_t, base_f = run(vec, None)
        assert base_t == pytest.approx(1.0, abs=1e-9)
        trans, fid = zip(*(run(vec, b) for b in belts))
        seq_t = (base_t,) + trans
        seq_f = (base_f,) + fid
        assert all(b <= a + 1e-12 for a, b in zip(seq_t, seq_t[1:]))  # transmission never increases
        if improves:
            assert all(b >= a - 1e-12 for a, b in zip(seq_f, seq_f[1:]))
        else:
            # the belt absorbs part of the correct |m| = 4 output: conditional fidelity falls
            assert seq_f[-1] < seq_f[0]


# --- fidelity formulas ----------------------------------------------------------


def test_swap_fidelity_reductions():
    rng = np.random.default_rng(35)
    for _ in range(20):
        g0, g4 = rng.uniform(0, 1, 2)
        p = SwapInputParams.from_angles(rng.uniform(), rng.uniform(0, 2 * math.pi))
        assert swap_fidelity(p, 1.0, 0.0) == pytest.approx(1.0)
        p0 = SwapInputParams.from_angles(0.0, 0.3)
        assert swap_fidelity(p0, g0, g4) == pytest.approx(abs(1 - g4))
        x2 = rng.uniform()
        pq = SwapInputParams.from_angles(x2, math.pi / 4)
        assert swap_fidelity(pq, g0, g4) == pytest.approx(abs(1 - (1 - x2) * g4))
    with pytest.raises(ValueError):
        SwapInputParams(1.0, 1.0, 0.0, 0.0)


def test_worst_case_closed_form_agrees_with_grid_search():
    rng = np.random.default_rng(36)
    cases = [(1.0, 0.0), (0.0, 0.0), (0.9188533, 0.1619272), (0.4, 0.2), (0.5, 0.5)] + [
        tuple(rng.uniform(0, 1, 2)) for _ in range(20)
    ]
    for g0, g4 in cases:
        closed = worst_case_from_gammas(g0, g4)
        assert worst_case_grid_search(g0, g4) == pytest.approx(closed, abs=1e-6)
        # complex b, c reach the same minimum: the overlap only depends on Re(conj(b) c)
        assert worst_case_complex(g0, g4) == pytest.approx(closed, abs=1e-6)
    assert worst_case_from_gammas(1.0, 0.0) == 1.0
    assert worst_case_fidelity(0.0, LG02, n=N) == 0.0


def test_per_state_fidelity_range_at_optimum():
    g0, g4 = exact_gamma(0, 2.928), exact_gamma(4, 2.928)
    best = max(
        swap_fidelity(SwapInputParams.from_angles(x2, th), g0, g4)
        for x2 in np.linspace(0, 1, 41)
        for th in np.linspace(0, 2 * math.pi, 73)
    )
    assert worst_case_from_gammas(g0, g4) == pytest.approx(0.837, abs=0.005)
    assert best > 0.99


def test_optimizer_small_cases():
    opt = optimize_disk_radius(LG02, (0.0, 0.0), 5, n=N)
    assert opt.R_star == 0.0
    with pytest.raises(ValueError):
        optimize_disk_radius(LG02, (3.0, 1.0), n=N)
    opt = optimize_disk_radius(LG02, (0.0, 6.0), 40, n=N)
    assert opt.R_star == pytest.approx(2.928, abs=0.06)
    g0 = [row[1] for row in opt.sweep]
    g4 = [row[2] for row in opt.sweep]
    assert all(b >= a - 1e-12 for a, b in zip(g0, g0[1:]))
    assert all(b >= a - 1e-12 for a, b in zip(g4, g4[1:]))


def test_focal_plane_profiles():
    prof = focal_plane_profiles(LG02, n=N)
    for key in ("m0", "m4"):
        p = prof[key]
        assert np.trapezoid(p.intensity, p.r) == pytest.approx(1.0, abs=1e-12)
    assert prof["m4"].intensity[0] == 0
    i0 = prof["m0"].intensity
    # beyond the first minimum of the m = 0 spot there is a secondary maximum
    interior_min = np.where((i0[1:-1] < i0[:-2]) & (i0[1:-1] < i0[2:]))[0]
    interior_max = np.where((i0[1:-1] > i0[:-2]) & (i0[1:-1] > i0[2:]))[0]
    assert len(interior_min) >= 1 and np.any(interior_max > interior_min[0])
    assert np.argmax(i0) == 0  # central spot
    assert np.argmax(prof["m4"].intensity) > 0  # doughnut
