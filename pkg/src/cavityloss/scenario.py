"""Scenario files: flat ``key = value [unit]`` text, one setting per line.

Lines starting with ``#`` are comments. Unknown keys are rejected. Values
without a unit take the key's default unit. :func:`save_scenario` writes
internal units with full float precision, so saving and loading again gives
back an identical scenario and hash.
"""
from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cavity import CavityGeometry
from .ensemble import POLARIZATIONS, CloudGeometry
from .errors import ConfigError
from .kinematics import CollisionGeometry, PairPotential, collision_times, excited_pair_count
from .units import C_LIGHT, HBAR, PRESETS, TWO_PI, AtomSpecies, convert, unit_dimension

# key -> (kind, dimension, default unit, internal unit)
KEYS: dict[str, tuple[str, str | None, str | None, str | None]] = {
    "species": ("str", None, None, None),
    "mass": ("float", "mass", "amu", "g"),
    "wavelength": ("float", "length", "nm", "cm"),
    "omega_A": ("float", "angular_frequency", "rad/s", "rad/s"),
    "gamma_A": ("float", "angular_frequency", "MHz", "rad/s"),
    "C3": ("float", "energy_volume", "erg_A3", "erg_cm3"),
    "detuning": ("float", "angular_frequency", "MHz", "rad/s"),
    "cavity_length": ("float", "length", "cm", "cm"),
    "mirror_diameter": ("float", "length", "cm", "cm"),
    "reflectivity": ("float", "dimensionless", "1", "1"),
    "gamma_c": ("float", "angular_frequency", "MHz", "rad/s"),
    "cloud_length": ("float", "length", "mm", "cm"),
    "cloud_radius": ("float", "length", "mm", "cm"),
    "N_A": ("float", "dimensionless", "1", "1"),
    "n_A": ("float", "density", "cm-3", "cm-3"),
    "trap_depth": ("float", "energy", "hMHz", "erg"),
    "n_pairs": ("int", None, None, None),
    "n_sets": ("int", None, None, None),
    "base_seed": ("int", None, None, None),
    "q_max": ("int", None, None, None),
    "polarization": ("str", None, None, None),
    "cavity": ("bool", None, None, None),
}

DEFAULT_SCENARIO = "default.scn"


@dataclass(frozen=True)
class Scenario:
    """Complete physical and numerical configuration, in internal units."""

    species: AtomSpecies
    detuning: float
    cavity: CavityGeometry
    cloud: CloudGeometry
    N_A: float
    n_A: float
    trap_depth: float
    n_pairs_override: int | None = None
    n_sets: int = 10
    base_seed: int = 0
    q_max: int = 40
    polarization: str = "circular"
    cavity_enabled: bool = True

    def __post_init__(self):
        if not self.detuning < 0:
            raise ConfigError(f"detuning must be negative (red detuned), got {self.detuning!r} rad/s")
        for name in ("N_A", "n_A", "trap_depth"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.n_sets < 1:
            raise ConfigError("n_sets must be >= 1")
        if self.q_max < 0:
            raise ConfigError("q_max must be >= 0")
        if self.n_pairs_override is not None and self.n_pairs_override < 1:
            raise ConfigError("n_pairs must be >= 1")
        if self.polarization not in POLARIZATIONS:
            raise ConfigError(f"polarization must be one of {sorted(POLARIZATIONS)}")

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    @property
    def omega_L(self) -> float:
        return self.species.omega_A + self.detuning

    @property
    def potential(self) -> PairPotential:
        return PairPotential.for_species(self.species)

    @property
    def energy_window(self) -> float:
        """Width of the no-loss shell, min(gamma_c, 2 V0 / hbar)."""
        return min(self.cavity.gamma_c, 2.0 * self.trap_depth / HBAR)

    def collision_geometry(self) -> CollisionGeometry:
        return collision_times(
            self.potential, self.species.reduced_mass, self.detuning, self.species.gamma, self.energy_window
        )

    def pair_count(self) -> float:
        g = self.collision_geometry()
        return excited_pair_count(self.N_A, self.n_A, g.R_C, g.Delta_R)

    @property
    def n_pairs(self) -> int:
        if self.n_pairs_override is not None:
            return self.n_pairs_override
        return max(1, int(round(self.pair_count())))


def _parse_value(key, raw, lineno):
    kind, dim, default_unit, internal = KEYS[key]
    if kind == "str":
        return raw
    if kind == "bool":
        low = raw.lower()
        if low in ("on", "true", "yes", "1"):
            return True
        if low in ("off", "false", "no", "0"):
            return False
        raise ConfigError(f"line {lineno}: {key}: expected on/off, got {raw!r}")
    parts = raw.split()
    if kind == "int":
        if len(parts) != 1:
            raise ConfigError(f"line {lineno}: {key}: expected a bare integer, got {raw!r}")
        try:
            return int(parts[0])
        except ValueError:
            raise ConfigError(f"line {lineno}: {key}: not an integer: {parts[0]!r}") from None
    if len(parts) not in (1, 2):
        raise ConfigError(f"line {lineno}: {key}: expected '<number> [unit]', got {raw!r}")
    try:
        number = float(parts[0])
    except ValueError:
        raise ConfigError(f"line {lineno}: {key}: not a number: {parts[0]!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"line {lineno}: {key}: value must be finite")
    unit = parts[1] if len(parts) == 2 else default_unit
    if key == "trap_depth" and unit == "MHz":
        unit = "hMHz"
    try:
        if unit_dimension(unit) != dim:
            raise ConfigError(f"line {lineno}: {key}: unit {unit!r} is not a {dim}")
        return convert(number, unit, internal)
    except ConfigError as exc:
        if str(exc).startswith("line"):
            raise
        raise ConfigError(f"line {lineno}: {key}: {exc}") from None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}: line {lineno}: expected 'key = value', got {stripped!r}")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}: line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}: line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _parse_value(key, raw, lineno)
        except ConfigError as exc:
            raise ConfigError(f"{source}: {exc}") from None
    try:
        return _assemble(values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def _assemble(values: dict) -> Scenario:
    base = _default_values()
    if "wavelength" in values and "omega_A" in values:
        raise ConfigError("give either wavelength or omega_A, not both")
    merged = {**base, **values}
    preset_name = merged["species"]
    if preset_name not in PRESETS:
        raise ConfigError(f"species: unknown preset {preset_name!r}; known: {sorted(PRESETS)}")
    preset = PRESETS[preset_name]
    if "wavelength" in values:
        omega_A = TWO_PI * C_LIGHT / values["wavelength"]
    else:
        omega_A = values.get("omega_A", preset.omega_A)
    species = AtomSpecies(
        name=preset.name,
        mass=values.get("mass", preset.mass),
        omega_A=omega_A,
        gamma_A=values.get("gamma_A", preset.gamma_A),
        C3=values.get("C3", preset.C3),
    )
    omega_L = species.omega_A + merged["detuning"]
    if not omega_L > 0:
        raise ConfigError("detuning: laser frequency would be non-positive")
    cavity = CavityGeometry(
        length=merged["cavity_length"],
        mirror_diameter=merged["mirror_diameter"],
        reflectivity=merged["reflectivity"],
        gamma_c=merged["gamma_c"],
        wavelength=TWO_PI * C_LIGHT / omega_L,
    )
    cloud = CloudGeometry(length=merged["cloud_length"], radius=merged["cloud_radius"])
    return Scenario(
        species=species,
        detuning=merged["detuning"],
        cavity=cavity,
        cloud=cloud,
        N_A=merged["N_A"],
        n_A=merged["n_A"],
        trap_depth=merged["trap_depth"],
        n_pairs_override=merged.get("n_pairs"),
        n_sets=merged["n_sets"],
        base_seed=merged["base_seed"],
        q_max=merged["q_max"],
        polarization=merged["polarization"],
        cavity_enabled=merged["cavity"],
    )


def _default_values() -> dict:
    # built-in fallbacks for keys a file leaves out; the shipped default file repeats them
    return {
        "species": "Rb85",
        "detuning": convert(-100.0, "MHz", "rad/s"),
        "cavity_length": 2.9,
        "mirror_diameter": 1.0,
        "reflectivity": 0.97,
        "gamma_c": convert(200.0, "MHz", "rad/s"),
        "cloud_length": convert(0.6, "mm", "cm"),
        "cloud_radius": convert(2.6e-2, "mm", "cm"),
        "N_A": 1e6,
        "n_A": 1e12,
        "trap_depth": convert(100.0, "hMHz", "erg"),
        "n_sets": 10,
        "base_seed": 0,
        "q_max": 40,
        "polarization": "circular",
        "cavity": True,
    }


def default_scenario_path() -> Path:
    return Path(str(resources.files("cavityloss") / "data" / DEFAULT_SCENARIO))


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file; ``"default"`` selects the shipped one."""
    if str(path) == "default":
        path = default_scenario_path()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    return parse_scenario(text, source=str(path))


def dump_scenario(sc: Scenario) -> str:
    """Canonical text form in internal units."""
    sp = sc.species
    rows = [
        ("species", sp.name),
        ("mass", f"{sp.mass!r} g"),
        ("omega_A", f"{sp.omega_A!r} rad/s"),
        ("gamma_A", f"{sp.gamma_A!r} rad/s"),
        ("C3", f"{sp.C3!r} erg_cm3"),
        ("detuning", f"{sc.detuning!r} rad/s"),
        ("cavity_length", f"{sc.cavity.length!r} cm"),
        ("mirror_diameter", f"{sc.cavity.mirror_diameter!r} cm"),
        ("reflectivity", f"{sc.cavity.reflectivity!r}"),
        ("gamma_c", f"{sc.cavity.gamma_c!r} rad/s"),
        ("cloud_length", f"{sc.cloud.length!r} cm"),
        ("cloud_radius", f"{sc.cloud.radius!r} cm"),
        ("N_A", f"{sc.N_A!r}"),
        ("n_A", f"{sc.n_A!r} cm-3"),
        ("trap_depth", f"{sc.trap_depth!r} erg"),
    ]
    if sc.n_pairs_override is not None:
        rows.append(("n_pairs", str(sc.n_pairs_override)))
    rows += [
        ("n_sets", str(sc.n_sets)),
        ("base_seed", str(sc.base_seed)),
        ("q_max", str(sc.q_max)),
        ("polarization", sc.polarization),
        ("cavity", "on" if sc.cavity_enabled else "off"),
    ]
    return "".join(f"{k} = {v}\n" for k, v in rows)


def save_scenario(sc: Scenario, path: str | Path) -> None:
    Path(path).write_text(dump_scenario(sc), encoding="utf-8")


def scenario_hash(sc: Scenario) -> str:
    return hashlib.sha256(dump_scenario(sc).encode("utf-8")).hexdigest()[:16]
