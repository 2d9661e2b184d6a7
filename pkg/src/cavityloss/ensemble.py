"""Random quasimolecule ensembles and the single-excitation entangled state."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityGeometry, ResonatorMode, mode_profile
from .errors import ConfigError, DegenerateStateError
from .units import HBAR

POLARIZATIONS = {
    "circular": np.array([1.0, 1.0j, 0.0]) / math.sqrt(2.0),
    "linear_x": np.array([1.0, 0.0, 0.0], dtype=complex),
}


@dataclass(frozen=True)
class CloudGeometry:
    """Uniform cylinder of atoms, axis along the cavity axis (z)."""

    length: float
    radius: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (self.length > 0 and self.radius > 0):
            raise ConfigError("cloud length and radius must be positive")


@dataclass(frozen=True)
class QuasimoleculePair:
    position: np.ndarray
    dipole_dir: np.ndarray
    coupling_V: complex
    amplitude_c: complex


@dataclass(frozen=True, eq=False)
class EntangledEnsemble:
    """State sum_i c_i |i;0> with c_i = V_i / (hbar Omega).

    Arrays are indexed by pair; ``couplings`` are in erg and
    ``collective_rabi`` in rad/s.
    """

    positions: np.ndarray
    dipole_dirs: np.ndarray
    couplings: np.ndarray
    pumped_mode: ResonatorMode
    polarization: str
    dipole_magnitude: float

    @property
    def n_pairs(self) -> int:
        return self.couplings.size

    @property
    def collective_rabi(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.couplings) ** 2))) / HBAR

    @property
    def amplitudes(self) -> np.ndarray:
        return self.couplings / (HBAR * self.collective_rabi)

    @property
    def projected_weights(self) -> np.ndarray:
        """|eps_L . d_hat_i|^2 for the unit dipole directions."""
        eps = POLARIZATIONS[self.polarization]
        return np.abs(self.dipole_dirs @ eps) ** 2

    @property
    def pairs(self) -> list[QuasimoleculePair]:
        c = self.amplitudes
        return [
            QuasimoleculePair(self.positions[i], self.dipole_dirs[i], complex(self.couplings[i]), complex(c[i]))
            for i in range(self.n_pairs)
        ]


def mode_volume(cavity: CavityGeometry) -> float:
    """Integral of |f_00|^2 over the standing-wave TEM00 mode: pi w0^2 l / 4."""
    return math.pi * cavity.waist**2 * cavity.length / 4.0


def field_per_photon(omega: float, volume: float) -> float:
    return math.sqrt(2.0 * math.pi * HBAR * omega / volume)


def sample_positions(cloud: CloudGeometry, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ConfigError("need at least one position")
    r = cloud.radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    z = cloud.length * (rng.random(n) - 0.5)
    pos = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return pos + np.asarray(cloud.center, dtype=float)


def sample_dipoles(n: int, rng: np.random.Generator) -> np.ndarray:
    """Isotropic unit vectors."""
    if n < 1:
        raise ConfigError("need at least one dipole")
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def coupling(
    position,
    dipole_dir,
    pumped_mode: ResonatorMode,
    omega_L: float,
    dipole_magnitude: float,
    polarization: str = "circular",
    volume: float | None = None,
):
    """Matrix element V = E(omega_L) f_c(r) (eps_L . d), vectorised over pairs."""
    if volume is None:
        volume = mode_volume(pumped_mode.cavity)
    eps = POLARIZATIONS[polarization]
    proj = np.asarray(dipole_dir, dtype=float) @ eps
    return field_per_photon(omega_L, volume) * mode_profile(pumped_mode, position) * dipole_magnitude * proj


def ensemble_from_pairs(
    positions,
    dipole_dirs,
    pumped_mode: ResonatorMode,
    omega_L: float,
    dipole_magnitude: float,
    polarization: str = "circular",
) -> EntangledEnsemble:
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    dipole_dirs = np.atleast_2d(np.asarray(dipole_dirs, dtype=float))
    V = np.atleast_1d(coupling(positions, dipole_dirs, pumped_mode, omega_L, dipole_magnitude, polarization))
    if not np.any(np.abs(V) > 0):
        raise DegenerateStateError("every pair is decoupled from the pumped mode")
    return EntangledEnsemble(
        positions=positions,
        dipole_dirs=dipole_dirs,
        couplings=V,
        pumped_mode=pumped_mode,
        polarization=polarization,
        dipole_magnitude=dipole_magnitude,
    )


def build_entangled_state(
    cloud: CloudGeometry,
    n_pairs: int,
    pumped_mode: ResonatorMode,
    rng: np.random.Generator,
    omega_L: float,
    dipole_magnitude: float,
    polarization: str = "circular",
) -> EntangledEnsemble:
    """Sample positions then dipoles from ``rng`` and build the shared excitation."""
    positions = sample_positions(cloud, n_pairs, rng)
    dipoles = sample_dipoles(n_pairs, rng)
    return ensemble_from_pairs(positions, dipoles, pumped_mode, omega_L, dipole_magnitude, polarization)
