"""Physical constants, unit conversion and atomic species data.

Everything inside the package is computed in Gaussian CGS units (erg, cm, s,
statC); angular frequencies are rad/s. Human-facing values (angstrom, MHz,
mm, mK) are converted at the edges with :func:`convert`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

HBAR = 1.054571e-27  # erg s
C_LIGHT = 2.99792458e10  # cm / s
AMU = 1.660539e-24  # g
K_B = 1.380649e-16  # erg / K
H_PLANCK = 2.0 * math.pi * HBAR

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    c: float = C_LIGHT
    amu: float = AMU
    k_B: float = K_B


CONSTANTS = PhysicalConstants()

# unit tag -> (dimension, factor to internal unit)
_UNITS: dict[str, tuple[str, float]] = {
    # length, internal cm
    "cm": ("length", 1.0),
    "m": ("length", 1e2),
    "mm": ("length", 1e-1),
    "um": ("length", 1e-4),
    "nm": ("length", 1e-7),
    "A": ("length", 1e-8),
    # angular frequency, internal rad/s; MHz etc. are cyclic frequencies
    "rad/s": ("angular_frequency", 1.0),
    "Hz": ("angular_frequency", TWO_PI),
    "kHz": ("angular_frequency", TWO_PI * 1e3),
    "MHz": ("angular_frequency", TWO_PI * 1e6),
    "GHz": ("angular_frequency", TWO_PI * 1e9),
    # energy, internal erg
    "erg": ("energy", 1.0),
    "K": ("energy", K_B),
    "mK": ("energy", K_B * 1e-3),
    "uK": ("energy", K_B * 1e-6),
    "hMHz": ("energy", H_PLANCK * 1e6),
    # dispersion coefficient C3, internal erg cm^3
    "erg_cm3": ("energy_volume", 1.0),
    "erg_A3": ("energy_volume", 1e-24),
    # mass, internal g
    "g": ("mass", 1.0),
    "amu": ("mass", AMU),
    # time, internal s
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "ns": ("time", 1e-9),
    # number density, internal cm^-3
    "cm-3": ("density", 1.0),
    "m-3": ("density", 1e-6),
    # pure numbers
    "1": ("dimensionless", 1.0),
}

ANGSTROM = _UNITS["A"][1]


def unit_dimension(unit: str) -> str:
    try:
        return _UNITS[unit][0]
    except KeyError:
        raise ConfigError(f"unknown unit {unit!r}") from None


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Convert ``value`` between two units of the same dimension.

    >>> round(convert(556, "A", "cm"), 14)
    5.56e-06
    """
    dim_from = unit_dimension(from_unit)
    dim_to = unit_dimension(to_unit)
    if dim_from != dim_to:
        raise ConfigError(
            f"cannot convert {from_unit!r} ({dim_from}) to {to_unit!r} ({dim_to})"
        )
    f_from = _UNITS[from_unit][1]
    f_to = _UNITS[to_unit][1]
    if f_from == f_to:
        return float(value)
    return value * f_from / f_to


@dataclass(frozen=True)
class AtomSpecies:
    """Atomic species entering the collision and emission models.

    Parameters
    ----------
    name : str
    mass : float
        Atomic mass in g.
    omega_A : float
        S1/2 -> P1/2 transition angular frequency, rad/s.
    gamma_A : float
        Atomic excited-state decay rate, rad/s.
    C3 : float
        Excited-state dipole-dipole coefficient, erg cm^3.
    """

    name: str
    mass: float
    omega_A: float
    gamma_A: float
    C3: float

    def __post_init__(self):
        for field in ("mass", "omega_A", "C3"):
            if not getattr(self, field) > 0:
                raise ConfigError(f"species {field} must be positive")
        if self.gamma_A < 0:
            raise ConfigError("species gamma_A must be non-negative")

    @property
    def reduced_mass(self) -> float:
        return self.mass / 2.0

    @property
    def wavelength(self) -> float:
        return TWO_PI * C_LIGHT / self.omega_A

    @property
    def gamma(self) -> float:
        """Quasimolecule decay rate, twice the atomic one."""
        return 2.0 * self.gamma_A

    @property
    def d_A(self) -> float:
        """Atomic dipole moment (statC cm), from Gamma_A = 4 d_A^2 w^3 / 3 hbar c^3."""
        return math.sqrt(3.0 * HBAR * C_LIGHT**3 * self.gamma_A / (4.0 * self.omega_A**3))

    @property
    def pair_dipole(self) -> float:
        return math.sqrt(2.0) * self.d_A


def species_from_wavelength(name, mass_amu, wavelength_nm, gamma_A_MHz, C3_erg_A3):
    return AtomSpecies(
        name=name,
        mass=convert(mass_amu, "amu", "g"),
        omega_A=TWO_PI * C_LIGHT / convert(wavelength_nm, "nm", "cm"),
        gamma_A=convert(gamma_A_MHz, "MHz", "rad/s"),
        C3=convert(C3_erg_A3, "erg_A3", "erg_cm3"),
    )


RB85 = species_from_wavelength("Rb85", 85.0, 795.0, 6.0, 11.4e-11)

PRESETS = {"Rb85": RB85}


def quasimolecule_linewidth(species: AtomSpecies) -> float:
    """Decay rate Gamma = 2 gamma_A of an excited atom pair, rad/s."""
    return species.gamma
