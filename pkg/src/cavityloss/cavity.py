"""Quasi-confocal Fabry-Perot resonator and its Hermite-Gaussian modes.

The mirrors sit at ``z = +/- length/2`` with the waist at ``z = 0``. Every
transverse mode is treated as degenerate with the pumped TEM00 resonance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from . import kernels
from .errors import ConfigError, NumericalError
from .units import TWO_PI


@dataclass(frozen=True)
class CavityGeometry:
    """Two identical spherical mirrors in (quasi-)confocal spacing.

    Parameters
    ----------
    length : float
        Mirror separation in cm.
    mirror_diameter : float
        Clear aperture 2b in cm.
    reflectivity : float
        Intensity reflectivity of each mirror, in (0, 1).
    gamma_c : float
        Cavity linewidth (FWHM) in rad/s. An input, not derived from the
        finesse.
    wavelength : float
        Operating wavelength in cm.
    """

    length: float
    mirror_diameter: float
    reflectivity: float
    gamma_c: float
    wavelength: float

    def __post_init__(self):
        if not 0.0 < self.reflectivity < 1.0:
            raise ConfigError(f"reflectivity must lie in (0, 1), got {self.reflectivity!r}")
        for name in ("length", "mirror_diameter", "gamma_c", "wavelength"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"cavity {name} must be positive")

    @property
    def k(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        return self.length / 2.0

    @property
    def waist(self) -> float:
        return math.sqrt(self.wavelength * self.length / TWO_PI)

    @property
    def mirror_radius(self) -> float:
        return self.mirror_diameter / 2.0

    def beam_radius(self, z):
        return self.waist * np.sqrt(1.0 + (z / self.rayleigh_range) ** 2)

    @property
    def divergence(self) -> float:
        """Far-field half-angle lambda / (pi w0) of TEM00."""
        return self.wavelength / (math.pi * self.waist)

    @property
    def mirror_solid_angle(self) -> float:
        """Solid angle subtended by both mirrors, seen from the centre."""
        half_angle = self.mirror_radius / (self.length / 2.0)
        return 2.0 * TWO_PI * (1.0 - math.cos(half_angle))

    @property
    def finesse(self) -> float:
        return finesse(self.reflectivity)

    @property
    def lambda_00(self) -> float:
        return enhancement_factor(self, 0.0)


@dataclass(frozen=True)
class ResonatorMode:
    """One transverse TEM_nm mode of ``cavity``."""

    n: int
    m: int
    cavity: CavityGeometry = field(repr=False)
    solid_angle: float = 0.0
    enhancement: float = 0.0
    clip_loss: float = 0.0

    @property
    def order(self) -> int:
        return self.n + self.m

    @property
    def waist(self) -> float:
        return self.cavity.waist


def hermite_function(n: int, u):
    """Unit-normalised Hermite function psi_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi))."""
    u = np.asarray(u, dtype=float)
    if n > 150:
        return kernels.hermite_table(np.atleast_1d(u).ravel(), n)[n].reshape(u.shape)
    log_norm = 0.5 * (n * math.log(2.0) + special.gammaln(n + 1) + 0.5 * math.log(math.pi))
    out = np.zeros_like(u)
    live = np.abs(u) < math.sqrt(2 * n + 1) + 38.0
    ul = u[live]
    out[live] = special.eval_hermite(n, ul) * np.exp(-0.5 * ul * ul - log_norm)
    return out


@lru_cache(maxsize=None)
def hermite_peak(n: int) -> float:
    """max_u |psi_n(u)|, attained on the outermost lobe."""
    if n == 0:
        return math.pi**-0.25
    u_edge = math.sqrt(2 * n + 1) + 3.0
    grid = np.linspace(0.0, u_edge, 4000 + 200 * n)
    vals = np.abs(hermite_function(n, grid))
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(
        lambda x: -abs(float(hermite_function(n, np.array(x)))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(-res.fun, vals[i])


def _axial_phase(cavity: CavityGeometry, x, y, z, order: int):
    """Standing-wave phase kz + k r^2/2R(z) - (q+1) Gouy(z); zero at the centre."""
    zr = cavity.rayleigh_range
    gouy = np.arctan(z / zr)
    inv_radius = z / (z * z + zr * zr)
    return (
        cavity.k * z
        + 0.5 * cavity.k * (x * x + y * y) * inv_radius
        - (order + 1) * gouy
    )


def mode_profile(mode: ResonatorMode, position) -> np.ndarray:
    """Real standing-wave amplitude of ``mode`` at ``position`` (cm).

    ``position`` is a 3-vector or an ``(N, 3)`` array. The amplitude is
    normalised so that its maximum over space is 1.
    """
    pos = np.asarray(position, dtype=float)
    x, y, z = pos[..., 0], pos[..., 1], pos[..., 2]
    cav = mode.cavity
    w = cav.beam_radius(z)
    envelope = (cav.waist / w) * hermite_function(mode.n, math.sqrt(2.0) * x / w) * hermite_function(
        mode.m, math.sqrt(2.0) * y / w
    )
    envelope = envelope / (hermite_peak(mode.n) * hermite_peak(mode.m))
    return envelope * np.cos(_axial_phase(cav, x, y, z, mode.order))


def transverse_overlap(mode_a: ResonatorMode, mode_b: ResonatorMode) -> complex:
    """Inner product of the two transverse profiles over the z = 0 plane, in cm^2."""
    if mode_a.cavity != mode_b.cavity:
        raise ConfigError("modes belong to different cavities")
    w0 = mode_a.cavity.waist

    def line(na, nb):
        f = lambda x: float(hermite_function(na, math.sqrt(2.0) * x / w0) * hermite_function(nb, math.sqrt(2.0) * x / w0))
        # split at the origin so odd/even structure is resolved on both sides
        edge = w0 * (math.sqrt(2 * max(na, nb) + 1) + 10.0) / math.sqrt(2.0)
        total = 0.0
        for lo, hi in ((-edge, 0.0), (0.0, edge)):
            val, err = integrate.quad(f, lo, hi, epsabs=1e-14 * w0, epsrel=1e-12, limit=400)
            if err > 1e-8 * w0:
                raise NumericalError(f"transverse_overlap quadrature error {err!r}")
            total += val
        return total

    norm = hermite_peak(mode_a.n) * hermite_peak(mode_a.m) * hermite_peak(mode_b.n) * hermite_peak(mode_b.m)
    return complex(line(mode_a.n, mode_b.n) * line(mode_a.m, mode_b.m) / norm)


def mode_solid_angle(cavity: CavityGeometry, q: int) -> float:
    """Solid angle of an order-q mode at both mirrors, capped by the mirror cone."""
    if q < 0:
        raise ConfigError("mode order must be non-negative")
    return min(math.pi * cavity.divergence**2 * 2.0 * (2 * q + 1), cavity.mirror_solid_angle)


def clip_loss(mode: ResonatorMode | tuple[int, int], cavity: CavityGeometry | None = None) -> float:
    """Fraction of the mode power missing the mirror aperture at z = length/2.

    Radial Gauss-Legendre panels outside the aperture; the angular integral is
    a trigonometric polynomial of degree 2q and is done exactly by the
    trapezoid rule.
    """
    if isinstance(mode, ResonatorMode):
        n, m = mode.n, mode.m
        cavity = mode.cavity if cavity is None else cavity
    else:
        n, m = mode
    q = n + m
    w_mirror = float(cavity.beam_radius(cavity.length / 2.0))
    rho_b = math.sqrt(2.0) * cavity.mirror_radius / w_mirror
    rho_max = math.sqrt(2 * q + 1) + 12.0
    if rho_b >= rho_max:
        return 0.0

    n_phi = 4 * q + 16
    phi = np.arange(n_phi) * (TWO_PI / n_phi)
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    nodes, weights = np.polynomial.legendre.leggauss(24)
    n_panels = max(4, int(math.ceil((rho_max - rho_b) / 0.5)))
    edges = np.linspace(rho_b, rho_max, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    rho = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    wrho = (half[:, None] * weights[None, :]).ravel()

    u = (rho[:, None] * cos_phi[None, :]).ravel()
    v = (rho[:, None] * sin_phi[None, :]).ravel()
    table_u = kernels.hermite_table(u, n)[n]
    table_v = kernels.hermite_table(v, m)[m]
    intensity = (table_u * table_v) ** 2
    angular = intensity.reshape(rho.size, n_phi).sum(axis=1) * (TWO_PI / n_phi)
    eps = float(np.sum(wrho * rho * angular))
    if not np.isfinite(eps):
        raise NumericalError(f"clip_loss quadrature produced {eps!r} for TEM{n}{m}")
    return min(max(eps, 0.0), 1.0)


def finesse(reflectivity: float) -> float:
    """Coefficient finesse pi sqrt(r) / (1 - r)."""
    return math.pi * math.sqrt(reflectivity) / (1.0 - reflectivity)


def enhancement_factor(cavity: CavityGeometry, clip: float = 0.0) -> float:
    """Peak spectral-density enhancement 2F/pi with clip-reduced reflectivity."""
    r_eff = cavity.reflectivity * (1.0 - clip)
    if not 0.0 < r_eff < 1.0:
        raise ConfigError(f"effective reflectivity {r_eff!r} is outside (0, 1)")
    return 2.0 * finesse(r_eff) / math.pi


def line_shape(omega, omega_center, cavity: CavityGeometry):
    """Lorentzian enhancement with peak Lambda_00 and FWHM gamma_c."""
    detuning = 2.0 * (np.asarray(omega) - omega_center) / cavity.gamma_c
    return cavity.lambda_00 / (1.0 + detuning * detuning)


def build_modes(cavity: CavityGeometry, q_max: int) -> list[ResonatorMode]:
    """All TEM_nm with n + m <= q_max, ordered by q then n."""
    if q_max < 0:
        raise ConfigError("q_max must be non-negative")
    modes = []
    for q in range(q_max + 1):
        solid = mode_solid_angle(cavity, q)
        for n in range(q + 1):
            eps = clip_loss((n, q - n), cavity)
            modes.append(
                ResonatorMode(
                    n=n,
                    m=q - n,
                    cavity=cavity,
                    solid_angle=solid,
                    enhancement=enhancement_factor(cavity, eps),
                    clip_loss=eps,
                )
            )
    return modes


def pumped_mode(cavity: CavityGeometry) -> ResonatorMode:
    return ResonatorMode(
        n=0,
        m=0,
        cavity=cavity,
        solid_angle=mode_solid_angle(cavity, 0),
        enhancement=enhancement_factor(cavity, clip_loss((0, 0), cavity)),
        clip_loss=clip_loss((0, 0), cavity),
    )
