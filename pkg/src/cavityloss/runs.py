"""Batch runs behind the ``sim`` subcommands, and their CSV/JSON output."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, kernels
from .cavity import build_modes
from .emission import EmissionResult, monte_carlo_emission
from .errors import ConfigError
from .loss import loss_probability, suppression_pipeline
from .scenario import Scenario, dump_scenario, scenario_hash
from .units import ANGSTROM, C_LIGHT, convert

CSV_SCHEMA_VERSION = 1

SET_COLUMNS = [
    "set_index",
    "N",
    "delta_omega_eff_over_4pi",
    "gamma_c_over_gamma",
    "gamma_t_c",
    "L0",
    "Lc",
    "ratio_p",
]
SWEEP_COLUMNS = [
    "parameter",
    "value",
    "R_C_angstrom",
    "N",
    "delta_omega_eff_over_4pi",
    "std_delta_omega_eff_over_4pi",
    "gamma_c_over_gamma",
    "std_gamma_c_over_gamma",
    "gamma_t_c",
    "L0",
    "Lc",
    "ratio_p",
]
MODE_COLUMNS = ["n", "m", "q", "solid_angle_sr", "clip_loss", "enhancement"]

COMMON_SUMMARY_FIELDS = [
    "command",
    "tool_version",
    "csv_schema_version",
    "scenario_hash",
    "timestamp",
    "kernel_backend",
    "q_max",
]
EMISSION_SUMMARY_FIELDS = COMMON_SUMMARY_FIELDS + [
    "n_sets",
    "base_seed",
    "n_pairs",
    "pair_count",
    "R_C_angstrom",
    "Delta_R_angstrom",
    "R_e_angstrom",
    "t_c",
    "t_e",
    "t_0",
    "gamma_t_c",
    "gamma_t_0",
    "mean_delta_omega_eff_over_4pi",
    "std_delta_omega_eff_over_4pi",
    "mean_gamma_c_over_gamma",
    "std_gamma_c_over_gamma",
    "std_defined",
    "mean_ratio_p",
    "std_ratio_p",
    "modes_used",
    "truncation_converged",
]
LOSS_SUMMARY_FIELDS = EMISSION_SUMMARY_FIELDS + ["L0", "Lc", "ratio_p", "approx_p"]
SWEEP_SUMMARY_FIELDS = COMMON_SUMMARY_FIELDS + ["parameter", "values", "n_sets", "base_seed", "rows"]
MODES_SUMMARY_FIELDS = COMMON_SUMMARY_FIELDS + ["finesse", "lambda_00", "waist_cm", "mirror_solid_angle_over_4pi", "n_modes"]

SUMMARY_FIELDS = {
    "emission": EMISSION_SUMMARY_FIELDS,
    "loss": LOSS_SUMMARY_FIELDS,
    "sweep": SWEEP_SUMMARY_FIELDS,
    "modes": MODES_SUMMARY_FIELDS,
}

SWEEP_PARAMETERS = ("detuning", "N_A", "n_A", "reflectivity_r", "trap_depth", "n_pairs")
# sweep value v_k uses base seeds base_seed + k * SWEEP_SEED_STRIDE
SWEEP_SEED_STRIDE = 10_000


@dataclass
class RunRecord:
    command: str
    key: str
    columns: list[str]
    rows: list[list]
    summary: dict
    metadata: list[tuple[str, float]] = field(default_factory=list)

    def csv_text(self) -> str:
        buf = io.StringIO()
        for name, value in self.metadata:
            buf.write(f"# {name} = {_fmt(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.summary, indent=2, allow_nan=False)

    def write(self, outdir: str | Path) -> tuple[Path, Path]:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{self.command}-{self.key}"
        csv_path = out / f"{stem}.csv"
        json_path = out / f"{stem}.json"
        csv_path.write_text(self.csv_text(), encoding="utf-8")
        json_path.write_text(self.json_text() + "\n", encoding="utf-8")
        return csv_path, json_path


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"refusing to write non-finite value {value!r}")
        return f"{value:.10e}"
    return str(value)


def _finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite result {x!r}")
    return x


def _header(command: str, sc: Scenario, key: str) -> dict:
    return {
        "command": command,
        "tool_version": __version__,
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "scenario_hash": key,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "kernel_backend": kernels.BACKEND,
        "q_max": sc.q_max,
    }


def _set_rows(sc: Scenario, em: EmissionResult):
    geom = sc.collision_geometry()
    Gamma = sc.species.gamma
    rows, ps = [], []
    for r in em.per_set:
        lr = loss_probability(Gamma, r.gamma_c_over_gamma * Gamma, geom.t_c, geom.t_e)
        ps.append(lr.ratio_p)
        rows.append(
            [
                r.set_index,
                r.n_pairs,
                _finite(r.delta_omega_eff_over_4pi),
                _finite(r.gamma_c_over_gamma),
                _finite(lr.gamma_t_c),
                _finite(lr.L0),
                _finite(lr.Lc),
                _finite(lr.ratio_p),
            ]
        )
    return geom, rows, ps


def _mean_std(values):
    mean = math.fsum(values) / len(values)
    if len(values) < 2:
        return mean, 0.0
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1))


def run_emission(sc: Scenario, workers: int = 1, command: str = "emission") -> RunRecord:
    """Monte Carlo collective emission, one CSV row per ensemble set."""
    key = scenario_hash(sc)
    em = monte_carlo_emission(sc, workers=workers)
    geom, rows, ps = _set_rows(sc, em)
    Gamma = sc.species.gamma
    mean_p, std_p = _mean_std(ps)
    summary = _header(command, sc, key)
    summary.update(
        n_sets=sc.n_sets,
        base_seed=sc.base_seed,
        n_pairs=sc.n_pairs,
        pair_count=_finite(sc.pair_count()),
        R_C_angstrom=geom.R_C_angstrom,
        Delta_R_angstrom=geom.Delta_R_angstrom,
        R_e_angstrom=geom.R_e_angstrom,
        t_c=geom.t_c,
        t_e=geom.t_e,
        t_0=geom.t_0,
        gamma_t_c=Gamma * geom.t_c,
        gamma_t_0=Gamma * geom.t_0,
        mean_delta_omega_eff_over_4pi=em.delta_omega_eff_over_4pi,
        std_delta_omega_eff_over_4pi=em.std_delta_omega_eff_over_4pi,
        mean_gamma_c_over_gamma=em.gamma_c_over_gamma,
        std_gamma_c_over_gamma=em.std_gamma_c_over_gamma,
        std_defined=em.std_defined,
        mean_ratio_p=mean_p,
        std_ratio_p=std_p,
        modes_used=em.modes_used,
        truncation_converged=em.truncation_converged,
    )
    if command == "loss":
        lr = suppression_pipeline(sc, emission=em)
        summary.update(L0=lr.L0, Lc=lr.Lc, ratio_p=lr.ratio_p, approx_p=lr.approx_p)
    return RunRecord(command, key, list(SET_COLUMNS), rows, summary)


def run_loss(sc: Scenario, workers: int = 1) -> RunRecord:
    """Like :func:`run_emission`, plus the loss ratio computed from the mean Gamma_c."""
    return run_emission(sc, workers=workers, command="loss")


def _apply_sweep_value(sc: Scenario, parameter: str, value: float) -> Scenario:
    if parameter == "detuning":
        detuning = convert(value, "MHz", "rad/s")
        omega_L = sc.species.omega_A + detuning
        cavity = dataclasses.replace(sc.cavity, wavelength=2.0 * math.pi * C_LIGHT / omega_L)
        return sc.replace(detuning=detuning, cavity=cavity)
    if parameter == "N_A":
        return sc.replace(N_A=float(value))
    if parameter == "n_A":
        return sc.replace(n_A=float(value))
    if parameter == "reflectivity_r":
        return sc.replace(cavity=dataclasses.replace(sc.cavity, reflectivity=float(value)))
    if parameter == "trap_depth":
        return sc.replace(trap_depth=convert(value, "hMHz", "erg"))
    if parameter == "n_pairs":
        if float(value) != int(value):
            raise ConfigError(f"n_pairs sweep values must be integers, got {value!r}")
        return sc.replace(n_pairs_override=int(value))
    raise ConfigError(f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")


def run_sweep(sc: Scenario, parameter: str, values, workers: int = 1) -> RunRecord:
    """One aggregate row per value of ``parameter``, everything else held fixed.

    Values are in the parameter's config default unit (MHz for detuning and
    trap depth, cm^-3 for n_A).
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("sweep needs at least one value")
    scenarios = []
    for k, v in enumerate(values):
        scenarios.append(_apply_sweep_value(sc, parameter, v).replace(base_seed=sc.base_seed + k * SWEEP_SEED_STRIDE))
    digest = hashlib.sha256((dump_scenario(sc) + f"sweep {parameter} {values!r}\n").encode()).hexdigest()[:16]
    rows = []
    for v, s in zip(values, scenarios):
        geom = s.collision_geometry()
        em = monte_carlo_emission(s, workers=workers)
        lr = suppression_pipeline(s, emission=em)
        rows.append(
            [
                parameter,
                _finite(v),
                geom.R_C / ANGSTROM,
                s.n_pairs,
                _finite(em.delta_omega_eff_over_4pi),
                _finite(em.std_delta_omega_eff_over_4pi),
                _finite(em.gamma_c_over_gamma),
                _finite(em.std_gamma_c_over_gamma),
                _finite(lr.gamma_t_c),
                _finite(lr.L0),
                _finite(lr.Lc),
                _finite(lr.ratio_p),
            ]
        )
    summary = _header("sweep", sc, digest)
    summary.update(parameter=parameter, values=values, n_sets=sc.n_sets, base_seed=sc.base_seed, rows=len(rows))
    return RunRecord("sweep", digest, list(SWEEP_COLUMNS), rows, summary)


def run_modes(sc: Scenario) -> RunRecord:
    """Table of the transverse modes kept in the mode sum."""
    key = scenario_hash(sc)
    cav = sc.cavity
    modes = build_modes(cav, sc.q_max)
    rows = [[md.n, md.m, md.order, md.solid_angle, md.clip_loss, md.enhancement] for md in modes]
    summary = _header("modes", sc, key)
    summary.update(
        finesse=cav.finesse,
        lambda_00=cav.lambda_00,
        waist_cm=cav.waist,
        mirror_solid_angle_over_4pi=cav.mirror_solid_angle / (4.0 * math.pi),
        n_modes=len(modes),
    )
    meta = [("finesse", cav.finesse), ("lambda_00", cav.lambda_00)]
    return RunRecord("modes", key, list(MODE_COLUMNS), rows, summary, metadata=meta)
