"""Long-range pair potential, resonance geometry and classical infall times.

All lengths are in cm and all rates in rad/s; use :func:`cavityloss.units.convert`
for angstrom or MHz values.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import ConfigError, NumericalError
from .units import ANGSTROM, HBAR, AtomSpecies


@dataclass(frozen=True)
class PairPotential:
    """Excited-state ``U(R) = -C3/R^3`` plus the atomic transition frequency.

    ``C6`` describes the ground-state van der Waals well. It is kept for
    completeness; none of the loss dynamics below use it.
    """

    C3: float
    omega_A: float
    C6: float | None = None

    @classmethod
    def for_species(cls, species: AtomSpecies) -> "PairPotential":
        return cls(C3=species.C3, omega_A=species.omega_A)

    def excited(self, R):
        return -self.C3 / R**3

    def ground(self, R):
        if self.C6 is None:
            return 0.0 * R
        return -self.C6 / R**6

    def excited_slope(self, R):
        return 3.0 * self.C3 / R**4

    def transition_frequency(self, R):
        """omega_R = omega_A - C3 / (hbar R^3)."""
        return self.omega_A - self.C3 / (HBAR * R**3)


@dataclass(frozen=True)
class CollisionGeometry:
    R_C: float
    Delta_R: float
    R_e: float
    t_c: float
    t_e: float

    @property
    def t_0(self) -> float:
        return self.t_c + self.t_e

    @property
    def R_C_angstrom(self) -> float:
        return self.R_C / ANGSTROM

    @property
    def Delta_R_angstrom(self) -> float:
        return self.Delta_R / ANGSTROM

    @property
    def R_e_angstrom(self) -> float:
        return self.R_e / ANGSTROM


def condon_point(pot: PairPotential, detuning: float) -> float:
    """Internuclear distance where a laser detuned by ``detuning`` is resonant.

    Solves ``omega_R(R_C) = omega_A + detuning``, which needs red detuning.
    """
    if not detuning < 0:
        raise ConfigError(f"detuning must be negative (red), got {detuning!r} rad/s")
    return (pot.C3 / (HBAR * -detuning)) ** (1.0 / 3.0)


def excitation_shell_width(pot: PairPotential, R_C: float, Gamma: float) -> float:
    """Linearised width hbar*Gamma/|U'(R_C)| of the resonantly excited shell."""
    if not R_C > 0:
        raise ConfigError("R_C must be positive")
    if Gamma < 0:
        raise ConfigError("Gamma must be non-negative")
    return HBAR * Gamma / pot.excited_slope(R_C)


def inner_resonant_radius(pot: PairPotential, R_C: float, energy_window: float) -> float:
    """Radius R_e where the pair has fallen ``hbar*energy_window`` below U(R_C)."""
    if not energy_window > 0:
        raise ConfigError("energy window must be positive")
    return (pot.C3 / (pot.C3 / R_C**3 + HBAR * energy_window)) ** (1.0 / 3.0)


def traversal_time(
    pot: PairPotential,
    mu: float,
    R_start: float,
    R_from: float,
    R_to: float,
    rtol: float = 1e-10,
) -> float:
    """Time to fall from ``R_from`` to ``R_to`` for a pair released at rest at ``R_start``.

    Uses energy conservation ``mu Rdot^2/2 + U(R) = U(R_start)``. The
    substitution ``u^2 = R_start - R`` removes the inverse square-root
    singularity at the turning point, and the factorisation
    ``R_start^3 - R^3 = u^2 (R_start^2 + R_start R + R^2)`` avoids
    cancellation near it.
    """
    if not 0 <= R_to <= R_from <= R_start:
        raise ConfigError("traversal_time needs 0 <= R_to <= R_from <= R_start")
    if R_from == R_to:
        return 0.0
    scale = math.sqrt(mu / (2.0 * pot.C3)) * R_start**1.5

    def integrand(u):
        R = R_start - u * u
        return 2.0 * scale * R**1.5 / math.sqrt(R_start * R_start + R_start * R + R * R)

    u_lo = math.sqrt(R_start - R_from)
    u_hi = math.sqrt(R_start - R_to)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(integrand, u_lo, u_hi, epsabs=0.0, epsrel=rtol, limit=200)
        except integrate.IntegrationWarning as exc:
            raise NumericalError(
                f"traversal_time quadrature failed on [{R_to:.6g}, {R_from:.6g}] cm: {exc}"
            ) from exc
    if not math.isfinite(value) or abserr > max(1e-6 * abs(value), 1e-300):
        raise NumericalError(f"traversal_time: value={value!r}, error estimate={abserr!r}")
    return value


def collision_times(
    pot: PairPotential,
    mu: float,
    detuning: float,
    Gamma: float,
    energy_window: float,
) -> CollisionGeometry:
    """Assemble Condon point, shell width, inner radius and the two infall times."""
    R_C = condon_point(pot, detuning)
    Delta_R = excitation_shell_width(pot, R_C, Gamma)
    R_e = inner_resonant_radius(pot, R_C, energy_window)
    t_c = traversal_time(pot, mu, R_C, R_C, R_e)
    t_e = traversal_time(pot, mu, R_C, R_e, 0.0)
    return CollisionGeometry(R_C=R_C, Delta_R=Delta_R, R_e=R_e, t_c=t_c, t_e=t_e)


def excited_pair_count(N_A: float, n_A: float, R_C: float, Delta_R: float) -> float:
    """Number of pairs within the excitation shell, N = N_A n_A 2 pi R_C^2 Delta_R."""
    if min(N_A, n_A, R_C, Delta_R) < 0:
        raise ConfigError("pair count inputs must be non-negative")
    return 0.5 * N_A * n_A * 4.0 * math.pi * R_C**2 * Delta_R
