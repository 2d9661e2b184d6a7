"""``sim`` command line entry point.

Examples
--------
sim loss --scenario default --out results
sim sweep --scenario default --param N_A --values 1e6,1e7,1e8
sim modes --scenario my.scn --qmax 10
"""
from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, SimulationError
from .runs import SWEEP_PARAMETERS, run_emission, run_loss, run_modes, run_sweep
from .scenario import load_scenario


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values: cannot parse {text!r} as comma-separated numbers") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sim", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=["emission", "loss", "sweep", "modes"])
    ap.add_argument("--scenario", default="default", help="scenario file, or 'default' for the shipped one")
    ap.add_argument("--sets", type=int, help="number of Monte Carlo sets (overrides n_sets)")
    ap.add_argument("--seed", type=int, help="base seed (overrides base_seed)")
    ap.add_argument("--qmax", type=int, help="highest transverse mode order (overrides q_max)")
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--param", choices=SWEEP_PARAMETERS, help="sweep parameter")
    ap.add_argument("--values", help="comma-separated sweep values")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        overrides = {}
        if args.sets is not None:
            overrides["n_sets"] = args.sets
        if args.seed is not None:
            overrides["base_seed"] = args.seed
        if args.qmax is not None:
            overrides["q_max"] = args.qmax
        if overrides:
            sc = sc.replace(**overrides)
        workers = max(1, args.workers)

        if args.command == "emission":
            record = run_emission(sc, workers=workers)
        elif args.command == "loss":
            record = run_loss(sc, workers=workers)
        elif args.command == "modes":
            record = run_modes(sc)
        else:
            if args.param is None or args.values is None:
                raise ConfigError("sweep needs --param and --values")
            record = run_sweep(sc, args.param, _parse_values(args.values), workers=workers)
        record.write(args.out)
    except SimulationError as exc:
        print(f"sim: error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(record.json_text())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
