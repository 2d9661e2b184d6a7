import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from cavityloss import RB85, PairPotential, convert
from cavityloss.errors import ConfigError
from cavityloss.kinematics import (
    collision_times,
    condon_point,
    excitation_shell_width,
    excited_pair_count,
    inner_resonant_radius,
    traversal_time,
)
from cavityloss.units import ANGSTROM, HBAR

POT = PairPotential.for_species(RB85)
MU = RB85.reduced_mass
DELTA = convert(-100, "MHz", "rad/s")
R_C = condon_point(POT, DELTA)
GAMMA = RB85.gamma
W200 = convert(200, "MHz", "rad/s")

# frozen from brentq root solves of omega_R(R) = omega_L and U(R_C) - U(R) = hbar W
R_C_50MHZ_A = 700.7445327776268
R_E_200MHZ_A = 385.63457790479697
# (1/3) B(5/6, 1/2)
BETA_COEFF = 0.746834200222187


def test_potential_shapes():
    assert POT.excited(R_C) < 0
    assert POT.excited(2 * R_C) > POT.excited(R_C)
    assert POT.transition_frequency(R_C) < POT.omega_A
    assert POT.transition_frequency(1.0) == pytest.approx(POT.omega_A, rel=1e-15)
    assert PairPotential(C3=1.0, omega_A=1.0, C6=2.0).ground(1.0) == -2.0


def test_condon_point_reference():
    assert R_C / ANGSTROM == pytest.approx(556, abs=1)


def test_condon_point_cube_root_law():
    assert condon_point(POT, 8 * DELTA) == pytest.approx(R_C / 2, rel=1e-14)


def test_condon_point_vs_bisection():
    assert condon_point(POT, convert(-50, "MHz", "rad/s")) / ANGSTROM == pytest.approx(R_C_50MHZ_A, rel=1e-10)
    # live oracle as well
    wL = POT.omega_A + convert(-50, "MHz", "rad/s")
    root = brentq(lambda R: POT.transition_frequency(R) - wL, 1e-7, 1e-4, xtol=1e-20, rtol=1e-15)
    assert condon_point(POT, convert(-50, "MHz", "rad/s")) == pytest.approx(root, rel=1e-10)


@pytest.mark.parametrize("detuning", [0.0, 1.0e8])
def test_condon_point_requires_red_detuning(detuning):
    with pytest.raises(ConfigError):
        condon_point(POT, detuning)


@given(st.floats(min_value=1e6, max_value=1e11))
def test_resonance_invariant(mag):
    R = condon_point(POT, -mag)
    wL = POT.omega_A - mag
    assert abs(POT.transition_frequency(R) - wL) <= 1e-9 * mag


def test_shell_width():
    assert excitation_shell_width(POT, R_C, GAMMA) / ANGSTROM == pytest.approx(22.4, rel=0.05)
    assert excitation_shell_width(POT, R_C, 0.0) == 0.0
    ratio = excitation_shell_width(POT, 2 * R_C, GAMMA) / excitation_shell_width(POT, R_C, GAMMA)
    assert ratio == pytest.approx(16, rel=1e-13)


def test_inner_radius():
    assert inner_resonant_radius(POT, R_C, W200) / ANGSTROM == pytest.approx(R_E_200MHZ_A, rel=1e-10)
    assert inner_resonant_radius(POT, R_C, W200) / ANGSTROM == pytest.approx(386, abs=1)
    assert inner_resonant_radius(POT, R_C, 1e-3) == pytest.approx(R_C, rel=1e-9)
    half = inner_resonant_radius(POT, R_C, -DELTA)
    assert half == pytest.approx(R_C / 2 ** (1 / 3), rel=1e-12)
    assert half / ANGSTROM == pytest.approx(441, abs=1)


def test_inner_radius_vs_bisection():
    root = brentq(lambda R: (POT.excited(R_C) - POT.excited(R)) - HBAR * W200, 1e-7, R_C, xtol=1e-20, rtol=1e-15)
    assert inner_resonant_radius(POT, R_C, W200) == pytest.approx(root, rel=1e-10)


@given(st.floats(min_value=1e5, max_value=1e10), st.floats(min_value=1.01, max_value=10))
def test_inner_radius_decreasing(w, factor):
    assert inner_resonant_radius(POT, R_C, w * factor) < inner_resonant_radius(POT, R_C, w)


def beta_fall_time(pot, mu, R):
    return BETA_COEFF * R**2.5 * math.sqrt(mu / (2 * pot.C3))


def test_fall_time_ref_value():
    t0 = traversal_time(POT, MU, R_C, R_C, 0.0)
    assert t0 == pytest.approx(3.0e-8, rel=0.05)


def test_fall_time_closed_form():
    t0 = traversal_time(POT, MU, R_C, R_C, 0.0)
    assert t0 == pytest.approx(beta_fall_time(POT, MU, R_C), rel=1e-4)
    assert t0 == pytest.approx(beta_fall_time(POT, MU, R_C), rel=1e-9)


def test_traversal_empty_interval():
    assert traversal_time(POT, MU, R_C, 400e-8, 400e-8) == 0.0


def test_traversal_bad_order():
    with pytest.raises(ConfigError):
        traversal_time(POT, MU, R_C, 300e-8, 400e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_traversal_additive(a, b):
    lo, hi = sorted((a * R_C, b * R_C))
    whole = traversal_time(POT, MU, R_C, R_C, lo)
    parts = traversal_time(POT, MU, R_C, R_C, hi) + traversal_time(POT, MU, R_C, hi, lo)
    assert parts == pytest.approx(whole, rel=1e-8)


def test_stronger_attraction_is_faster():
    strong = PairPotential(C3=2 * POT.C3, omega_A=POT.omega_A)
    assert traversal_time(strong, MU, R_C, R_C, 0.0) < traversal_time(POT, MU, R_C, R_C, 0.0)


def test_collision_times_reference():
    g = collision_times(POT, MU, DELTA, GAMMA, W200)
    assert GAMMA * g.t_c == pytest.approx(1.7, rel=0.10)
    assert GAMMA * g.t_0 == pytest.approx(2.3, rel=0.10)
    assert g.t_0 == pytest.approx(g.t_c + g.t_e)
    assert 0 < g.R_e < g.R_C


def test_collision_times_zero_window_limit():
    g = collision_times(POT, MU, DELTA, GAMMA, 1e-3)
    t0 = traversal_time(POT, MU, R_C, R_C, 0.0)
    assert g.t_c < 1e-3 * t0
    assert g.t_e == pytest.approx(t0, rel=1e-3)


def test_pair_count():
    assert excited_pair_count(1e6, 1e12, 556e-8, 22.4e-8) == pytest.approx(43.5, abs=0.05)
    assert excited_pair_count(1e6, 0.0, 556e-8, 22.4e-8) == 0.0
    assert excited_pair_count(1e6, 1e12, 556e-8, 44.8e-8) == pytest.approx(
        2 * excited_pair_count(1e6, 1e12, 556e-8, 22.4e-8)
    )
    g = collision_times(POT, MU, DELTA, GAMMA, W200)
    assert excited_pair_count(1e6, 1e12, g.R_C, g.Delta_R) == pytest.approx(43.5, abs=0.5)
