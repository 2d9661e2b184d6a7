"""Collective emission of the entangled ensemble into the degenerate cavity modes."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cavity import ResonatorMode, build_modes, hermite_peak, mode_profile, pumped_mode
from .ensemble import POLARIZATIONS, EntangledEnsemble, build_entangled_state
from .errors import DegenerateStateError

# early stop: this many consecutive orders each moving the running sum by < STOP_RTOL
STOP_ORDERS = 5
STOP_RTOL = 1e-3


@dataclass(frozen=True)
class ModeSum:
    value: float
    modes_used: int
    converged: bool
    terms: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SetResult:
    set_index: int
    seed: int
    n_pairs: int
    delta_omega_eff_over_4pi: float
    gamma_c_over_gamma: float
    collective_rabi: float
    modes_used: int
    converged: bool


@dataclass(frozen=True)
class EmissionResult:
    delta_omega_eff_over_4pi: float
    gamma_c_over_gamma: float
    std_delta_omega_eff_over_4pi: float
    std_gamma_c_over_gamma: float
    std_defined: bool
    per_set: list[SetResult]
    n_pairs: int
    modes_used: int
    truncation_converged: bool


def _truncate(orders, terms, early_stop: bool) -> tuple[float, int, bool]:
    """Sum ``terms`` in order, stopping once STOP_ORDERS whole orders were negligible."""
    if not early_stop:
        return float(np.sum(terms)), len(terms), False
    total = 0.0
    quiet = 0
    i = 0
    n = len(terms)
    while i < n:
        q = orders[i]
        j = i
        block = 0.0
        while j < n and orders[j] == q:
            block += terms[j]
            j += 1
        total += block
        i = j
        if total > 0 and abs(block) < STOP_RTOL * total:
            quiet += 1
            if quiet >= STOP_ORDERS:
                return total, i, True
        else:
            quiet = 0
    return total, n, False


def _normalized_weights(ensemble: EntangledEnsemble) -> np.ndarray:
    w = ensemble.projected_weights
    mean_w = float(np.mean(w))
    if not mean_w > 0:
        raise DegenerateStateError("all dipoles are orthogonal to the pump polarization")
    return w / mean_w


def mode_sum(ensemble: EntangledEnsemble, modes: list[ResonatorMode], early_stop: bool = True) -> ModeSum:
    """Per-mode terms of the overlap-weighted solid angle, with truncation info."""
    if not modes:
        raise ValueError("mode list is empty")
    pump = ensemble.pumped_mode
    cav = pump.cavity
    lam00 = pump.enhancement
    pos = ensemble.positions
    x, y, z = pos[:, 0], pos[:, 1], pos[:, 2]
    wz = cav.beam_radius(z)
    ux = math.sqrt(2.0) * x / wz
    uy = math.sqrt(2.0) * y / wz
    zr = cav.rayleigh_range
    gouy = np.arctan(z / zr)
    theta = cav.k * z + 0.5 * cav.k * (x * x + y * y) * z / (z * z + zr * zr) - gouy
    chi = gouy

    q_max = max(md.order for md in modes)
    psi_x = kernels.hermite_table(np.ascontiguousarray(ux), q_max)
    psi_y = kernels.hermite_table(np.ascontiguousarray(uy), q_max)
    envelope = cav.waist / wz
    p0 = hermite_peak(0)
    f_c = envelope * psi_x[0] * psi_y[0] / (p0 * p0) * np.cos(theta)

    w = _normalized_weights(ensemble)
    n = w.size
    denom = float(np.mean(w * f_c * f_c))
    if not denom > 0:
        raise DegenerateStateError("ensemble has no weight on the pumped mode")
    amp = np.ascontiguousarray(w * f_c * envelope / n)
    overlaps = kernels.mode_overlaps(psi_x, psi_y, np.ascontiguousarray(theta), np.ascontiguousarray(chi), amp, q_max)

    terms = np.empty(len(modes))
    orders = []
    for j, md in enumerate(modes):
        q = md.order
        s = overlaps[q * (q + 1) // 2 + md.n] / (hermite_peak(md.n) * hermite_peak(md.m))
        terms[j] = md.solid_angle * (md.enhancement / lam00) * s * s / denom
        orders.append(q)
    value, used, converged = _truncate(orders, terms, early_stop)
    return ModeSum(value=value, modes_used=used, converged=converged, terms=terms)


def effective_solid_angle(ensemble: EntangledEnsemble, modes: list[ResonatorMode], early_stop: bool = True) -> float:
    """Overlap-weighted solid angle of the ensemble's coupling to the mode family, sr.

    The dipole weights |eps_L . d_i|^2 enter divided by their ensemble mean, so
    the result depends only on the relative weights.
    """
    return mode_sum(ensemble, modes, early_stop).value


def collective_rate(delta_omega_eff, N, Lambda_00, omega_L, omega_A, Gamma):
    """Gamma_c = (1 + 3/2 (dOmega_eff/4pi) N Lambda_00 (omega_L/omega_A)^3) Gamma."""
    boost = 1.5 * (delta_omega_eff / (4.0 * math.pi)) * N * Lambda_00 * (omega_L / omega_A) ** 3
    return (1.0 + boost) * Gamma


def emission_rate_general(
    ensemble: EntangledEnsemble,
    modes: list[ResonatorMode],
    omega_R: float,
    *,
    omega_L: float,
    omega_A: float,
    Gamma: float,
    gamma_c: float | None = None,
    early_stop: bool = True,
) -> float:
    """Golden-rule decay rate of the entangled state, summed over cavity modes.

    For every mode the collective dipole ``X = sum_i f_nm(r_i) c_i^* d_i`` is
    projected on the pump polarization. The free-space density is referenced
    to the ensemble-mean projected dipole strength, and the cavity density
    follows the Lorentzian line centred on ``omega_L``. Emission outside the
    mirrors contributes exactly ``Gamma``.
    """
    cav = ensemble.pumped_mode.cavity
    gamma_c = cav.gamma_c if gamma_c is None else gamma_c
    eps = POLARIZATIONS[ensemble.polarization]
    proj = ensemble.dipole_magnitude * (ensemble.dipole_dirs @ eps)
    ref = float(np.mean(np.abs(proj) ** 2))
    if not ref > 0:
        raise DegenerateStateError("all dipoles are orthogonal to the pump polarization")
    weighted = np.conj(ensemble.amplitudes) * proj

    terms = np.empty(len(modes))
    orders = []
    for j, md in enumerate(modes):
        X = np.sum(mode_profile(md, ensemble.positions) * weighted)
        terms[j] = md.solid_angle * md.enhancement * abs(X) ** 2 / ref
        orders.append(md.order)
    total, _, _ = _truncate(orders, terms, early_stop)
    x = 2.0 * (omega_R - omega_L) / gamma_c
    lorentz = 1.0 / (1.0 + x * x)
    cavity_part = 3.0 / (8.0 * math.pi) * lorentz * (omega_R / omega_A) ** 3 * total
    return Gamma * (1.0 + cavity_part)


def _run_set(scenario, modes, pump, set_index: int) -> SetResult:
    seed = scenario.base_seed + set_index
    n_pairs = scenario.n_pairs
    if not scenario.cavity_enabled:
        return SetResult(set_index, seed, n_pairs, 0.0, 1.0, 0.0, 0, True)
    rng = np.random.default_rng(seed)
    ens = build_entangled_state(
        scenario.cloud,
        n_pairs,
        pump,
        rng,
        omega_L=scenario.omega_L,
        dipole_magnitude=scenario.species.pair_dipole,
        polarization=scenario.polarization,
    )
    ms = mode_sum(ens, modes)
    sp = scenario.species
    ratio = collective_rate(ms.value, n_pairs, pump.enhancement, scenario.omega_L, sp.omega_A, 1.0)
    return SetResult(
        set_index=set_index,
        seed=seed,
        n_pairs=n_pairs,
        delta_omega_eff_over_4pi=ms.value / (4.0 * math.pi),
        gamma_c_over_gamma=ratio,
        collective_rabi=ens.collective_rabi,
        modes_used=ms.modes_used,
        converged=ms.converged,
    )


def _aggregate(values: list[float]) -> tuple[float, float]:
    arr = np.array(values, dtype=float)
    mean = float(math.fsum(arr) / arr.size)
    if arr.size < 2:
        return mean, 0.0
    return mean, float(math.sqrt(math.fsum((arr - mean) ** 2) / (arr.size - 1)))


def monte_carlo_emission(scenario, n_sets: int | None = None, base_seed: int | None = None, workers: int = 1) -> EmissionResult:
    """Average the collective enhancement over independently seeded ensembles.

    Set ``s`` uses seed ``base_seed + s``; results are reduced in set order, so
    the outcome does not depend on ``workers``.
    """
    if n_sets is not None or base_seed is not None:
        scenario = scenario.replace(
            n_sets=scenario.n_sets if n_sets is None else n_sets,
            base_seed=scenario.base_seed if base_seed is None else base_seed,
        )
    if scenario.n_sets < 1:
        raise ValueError("n_sets must be >= 1")
    modes = build_modes(scenario.cavity, scenario.q_max)
    pump = pumped_mode(scenario.cavity)
    indices = range(scenario.n_sets)
    if workers > 1 and scenario.n_sets > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_set = list(pool.map(_run_set, [scenario] * len(indices), [modes] * len(indices), [pump] * len(indices), indices))
    else:
        per_set = [_run_set(scenario, modes, pump, s) for s in indices]

    mean_do, std_do = _aggregate([r.delta_omega_eff_over_4pi for r in per_set])
    mean_g, std_g = _aggregate([r.gamma_c_over_gamma for r in per_set])
    return EmissionResult(
        delta_omega_eff_over_4pi=mean_do,
        gamma_c_over_gamma=mean_g,
        std_delta_omega_eff_over_4pi=std_do,
        std_gamma_c_over_gamma=std_g,
        std_defined=len(per_set) > 1,
        per_set=per_set,
        n_pairs=scenario.n_pairs,
        modes_used=max(r.modes_used for r in per_set),
        truncation_converged=all(r.converged for r in per_set),
    )
