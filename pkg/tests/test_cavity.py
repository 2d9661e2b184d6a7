import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cavityloss.cavity import (
    CavityGeometry,
    ResonatorMode,
    build_modes,
    clip_loss,
    enhancement_factor,
    finesse,
    hermite_function,
    hermite_peak,
    line_shape,
    mode_profile,
    mode_solid_angle,
    transverse_overlap,
)
from cavityloss.errors import ConfigError


def test_geometry(ref_cavity):
    w0 = math.sqrt(ref_cavity.wavelength * 2.9 / (2 * math.pi))
    assert ref_cavity.waist == pytest.approx(w0)
    assert ref_cavity.rayleigh_range == pytest.approx(1.45)
    assert float(ref_cavity.beam_radius(1.45)) == pytest.approx(w0 * math.sqrt(2))
    assert float(ref_cavity.beam_radius(1.45)) == pytest.approx(86e-4, rel=0.01)


@pytest.mark.parametrize("r", [0.0, 1.0, -0.2, 1.5])
def test_reflectivity_bounds(r):
    with pytest.raises(ConfigError):
        CavityGeometry(2.9, 1.0, r, 1.0, 795e-7)


def test_pumped_mode_normalisation(ref_cavity):
    tem00 = ResonatorMode(0, 0, ref_cavity)
    assert abs(mode_profile(tem00, [0, 0, 0])) == pytest.approx(1.0, rel=1e-14)
    w0 = ref_cavity.waist
    assert abs(mode_profile(tem00, [w0, 0, 0])) == pytest.approx(math.exp(-1), rel=1e-12)


def test_odd_mode_vanishes_on_axis(ref_cavity):
    assert mode_profile(ResonatorMode(1, 0, ref_cavity), [0, 0, 0]) == 0.0
    assert mode_profile(ResonatorMode(0, 3, ref_cavity), [1e-3, 0, 0.01]) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n, m", [(0, 0), (1, 0), (2, 3), (6, 1), (20, 20)])
def test_profile_peak_is_one(ref_cavity, n, m):
    mode = ResonatorMode(n, m, ref_cavity)
    w0 = ref_cavity.waist
    u = np.linspace(-(math.sqrt(2 * n + 1) + 2), math.sqrt(2 * n + 1) + 2, 4001)
    v = np.linspace(-(math.sqrt(2 * m + 1) + 2), math.sqrt(2 * m + 1) + 2, 4001)
    fx = np.abs(mode_profile(ResonatorMode(n, 0, ref_cavity), np.column_stack([u * w0 / math.sqrt(2), 0 * u, 0 * u])))
    # profile separates; check each factor peaks at 1 and the product stays bounded
    assert fx.max() <= 1 + 1e-12
    assert fx.max() == pytest.approx(1.0, abs=2e-4) if m == 0 else True
    grid = np.column_stack([u * w0 / math.sqrt(2), v * w0 / math.sqrt(2), 0 * u])
    assert np.abs(mode_profile(mode, grid)).max() <= 1 + 1e-12


def test_hermite_function_matches_recurrence():
    from cavityloss import _kernels_py

    u = np.linspace(-12, 12, 301)
    table = _kernels_py.hermite_table(u, 60)
    for n in (0, 1, 5, 33, 60):
        assert np.allclose(hermite_function(n, u), table[n], atol=1e-13)


def test_hermite_peak_analytic():
    # psi_1 peaks at u = 1 with value sqrt(2) pi^-1/4 e^-1/2
    assert hermite_peak(1) == pytest.approx(math.sqrt(2) * math.pi**-0.25 * math.exp(-0.5), rel=1e-12)
    assert hermite_peak(0) == pytest.approx(math.pi**-0.25)


def test_self_overlap_positive(ref_cavity):
    tem00 = ResonatorMode(0, 0, ref_cavity)
    val = transverse_overlap(tem00, tem00)
    assert val.imag == 0 and val.real > 0
    assert val.real == pytest.approx(math.pi * ref_cavity.waist**2 / 2, rel=1e-10)


def test_orthogonal_modes(ref_cavity):
    a = ResonatorMode(0, 0, ref_cavity)
    b = ResonatorMode(1, 0, ref_cavity)
    ab = abs(transverse_overlap(a, b))
    assert ab <= 1e-8 * abs(transverse_overlap(a, a))


def test_tem11_norm_gauss_hermite(ref_cavity):
    # oracle: Gauss-Hermite quadrature of H_1^2, and the analytic peak of psi_1
    nodes, weights = np.polynomial.hermite.hermgauss(20)
    h1_norm = np.sum(weights * (2 * nodes) ** 2) / (2 * math.sqrt(math.pi))
    peak1 = math.sqrt(2) * math.pi**-0.25 * math.exp(-0.5)
    line = ref_cavity.waist / math.sqrt(2) * h1_norm / peak1**2
    m = ResonatorMode(1, 1, ref_cavity)
    assert transverse_overlap(m, m).real == pytest.approx(line**2, rel=1e-6)


def test_discrete_orthogonality_up_to_order_6(ref_cavity):
    modes = [ResonatorMode(n, q - n, ref_cavity) for q in range(7) for n in range(q + 1)]
    norms = {(md.n, md.m): transverse_overlap(md, md).real for md in modes}
    for i, a in enumerate(modes):
        for b in modes[i + 1 :]:
            val = abs(transverse_overlap(a, b))
            assert val / math.sqrt(norms[a.n, a.m] * norms[b.n, b.m]) <= 1e-6


def test_solid_angle_tem00(ref_cavity):
    w0 = math.sqrt(795e-7 * 2.9 / (2 * math.pi))
    theta0 = 795e-7 / (math.pi * w0)
    assert mode_solid_angle(ref_cavity, 0) == pytest.approx(2 * math.pi * theta0**2, rel=1e-6)
    assert mode_solid_angle(ref_cavity, 0) == pytest.approx(1.10e-4, rel=0.01)


def test_solid_angle_cap(ref_cavity):
    cap = ref_cavity.mirror_solid_angle
    assert cap / (4 * math.pi) == pytest.approx(0.059, abs=0.0005)
    theta_m = 0.5 / 1.45
    assert cap == pytest.approx(4 * math.pi * (1 - math.cos(theta_m)), rel=1e-14)
    q_cap = math.ceil((cap / mode_solid_angle(ref_cavity, 0) - 1) / 2)
    assert mode_solid_angle(ref_cavity, q_cap) == cap
    assert mode_solid_angle(ref_cavity, q_cap + 100) == cap


def test_solid_angle_increasing_and_capped(ref_cavity):
    vals = [mode_solid_angle(ref_cavity, q) for q in range(0, 200)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert max(vals) <= ref_cavity.mirror_solid_angle


def test_clip_loss_tem00_reference(ref_cavity):
    eps = clip_loss(ResonatorMode(0, 0, ref_cavity))
    w_m = float(ref_cavity.beam_radius(1.45))
    assert math.exp(-2 * 0.5**2 / w_m**2) < 1e-30
    assert eps < 1e-30


def test_clip_loss_gaussian_tail_oracle(narrow_cavity):
    w_m = float(narrow_cavity.beam_radius(1.45))
    oracle = math.exp(-2 * narrow_cavity.mirror_radius**2 / w_m**2)
    assert clip_loss((0, 0), narrow_cavity) == pytest.approx(oracle, rel=1e-10)


def test_clip_loss_zero_aperture_limit(ref_cavity):
    import dataclasses

    tiny = dataclasses.replace(ref_cavity, mirror_diameter=1e-12)
    for n, m in [(0, 0), (2, 1), (5, 5)]:
        assert clip_loss((n, m), tiny) == pytest.approx(1.0, abs=1e-9)


def test_clip_loss_increases_with_order(narrow_cavity):
    # the power-averaged loss of each degenerate order rises with q; single
    # members of an order (e.g. the largest one) can dip by ~3e-4
    per_order_mean = []
    for q in range(0, 51):
        eps = [clip_loss((n, q - n), narrow_cavity) for n in range(q + 1)]
        assert all(0 <= e < 1 for e in eps)
        per_order_mean.append(sum(eps) / len(eps))
    assert all(b > a for a, b in zip(per_order_mean, per_order_mean[1:]))


def test_finesse_and_enhancement(ref_cavity):
    assert finesse(0.97) == pytest.approx(103, abs=0.5)
    assert enhancement_factor(ref_cavity) == pytest.approx(66, abs=1)
    assert enhancement_factor(ref_cavity) == pytest.approx(2 * finesse(0.97) / math.pi)


def test_enhancement_rejects_unit_effective_reflectivity(ref_cavity):
    with pytest.raises(ConfigError):
        enhancement_factor(ref_cavity, 1 - 1 / 0.97)
    with pytest.raises(ConfigError):
        enhancement_factor(ref_cavity, 1.0)


@given(st.floats(0, 0.99), st.floats(0, 0.99))
def test_enhancement_degrades_with_clip(a, b):
    cav = CavityGeometry(2.9, 1.0, 0.97, 1.0, 795e-7)
    lo, hi = sorted((a, b))
    assert enhancement_factor(cav, hi) <= enhancement_factor(cav, lo) <= enhancement_factor(cav, 0.0)


def test_line_shape(ref_cavity):
    lam = ref_cavity.lambda_00
    g = ref_cavity.gamma_c
    w0 = 1.0e10
    assert line_shape(w0, w0, ref_cavity) == pytest.approx(lam)
    assert line_shape(w0 + g / 2, w0, ref_cavity) == pytest.approx(lam / 2, rel=1e-12)
    assert line_shape(w0 - g / 2, w0, ref_cavity) == pytest.approx(lam / 2, rel=1e-12)
    assert line_shape(w0 + 5 * g, w0, ref_cavity) == pytest.approx(lam / 101, rel=1e-12)


@given(st.floats(0, 50), st.floats(0, 50))
def test_line_shape_even_and_monotone(a, b):
    cav = CavityGeometry(2.9, 1.0, 0.97, 1.0, 795e-7)
    assert line_shape(a, 0.0, cav) == pytest.approx(line_shape(-a, 0.0, cav), rel=1e-15)
    lo, hi = sorted((a, b))
    assert line_shape(hi, 0.0, cav) <= line_shape(lo, 0.0, cav)


def test_build_modes_ordering(ref_cavity):
    modes = build_modes(ref_cavity, 3)
    assert [(m.n, m.m) for m in modes] == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0), (0, 3), (1, 2), (2, 1), (3, 0)]
    lam00 = modes[0].enhancement
    assert all(m.enhancement <= lam00 for m in build_modes(ref_cavity, 10))


def test_build_modes_clipped_never_exceeds_tem00(narrow_cavity):
    modes = build_modes(narrow_cavity, 8)
    lam00 = modes[0].enhancement
    assert all(m.enhancement < lam00 for m in modes[1:])
