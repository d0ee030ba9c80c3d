"""
Command-line front end

    python -m src.main predict  --config configs/hard_logistic.json --out results/predict.csv
    python -m src.main phase    --config configs/phase_regression.json --jobs 8
    python -m src.main simulate --config configs/simulate_regression.json --seed 7 --deterministic
    python -m src.main plotdata results/predict.csv --out results/curves

Sweep settings come from a JSON file; flags override it. Exit status is
0 iff every row succeeded, 1 when some rows failed and 2 on invalid
input.
"""

import argparse
import asyncio
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.config.app_config import AppConfig, get_app_config, set_app_config
from src.core.errors import SpecValidationError, TransferLabError, UnsupportedConfigurationError
from src.core.validation import check_spec
from src.models.schemas import ResultFormat, SweepConfig
from src.repositories.result_repository import format_from_path, repository_for
from src.services.config import get_service
from src.services.phase_service import PhaseService
from src.services.plotdata_service import PlotDataService
from src.services.prediction_service import PredictionService
from src.services.simulation_service import SimulationService
from src.services.sweeps import ResultTable
from src.utils.log_setup import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_ROWS = 1
EXIT_INVALID = 2

_SPEC_FLAGS = {
    "alpha_s": "alpha_s",
    "alpha_t": "alpha_t",
    "rho": "rho",
    "lam": "lambda",
    "loss": "loss",
    "phi": "phi",
    "phi_hat": "phi_hat",
    "upsilon": "upsilon",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transfer-phase",
        description="Asymptotic predictions, phase diagrams and simulations of transfer learning",
    )
    subcommands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Output path (file, or directory for plotdata)")
    common.add_argument("--jobs", type=int, help="Worker processes (default: available CPUs)")
    common.add_argument("--deterministic", action="store_true", help="Suppress timestamps and hostnames")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level",
    )

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--config", help="Sweep configuration JSON file")
    sweep.add_argument("--format", choices=[f.value for f in ResultFormat], help="Output format")
    sweep.add_argument("--seed", type=int, help="Master seed for simulations")
    sweep.add_argument("--axis", dest="sweep_axis", help="Sweep axis")
    sweep.add_argument("--grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"), help="Sweep grid")
    sweep.add_argument("--alpha-s", dest="alpha_s", type=float)
    sweep.add_argument("--alpha-t", dest="alpha_t", type=float)
    sweep.add_argument("--alpha-s-ratio", dest="alpha_s_ratio", type=float)
    sweep.add_argument("--rho", type=float)
    sweep.add_argument("--lambda", dest="lam", type=float)
    sweep.add_argument("--loss", choices=["squared", "logistic", "hinge"])
    sweep.add_argument("--phi", choices=["identity", "relu", "sign"])
    sweep.add_argument("--phi-hat", dest="phi_hat", choices=["identity", "sign"])
    sweep.add_argument("--upsilon", type=int, choices=[0, 1])
    sweep.add_argument("--delta", type=float, help="Hard transfer with this rate")
    sweep.add_argument("--beta-t", dest="beta_t", type=float, help="Soft transfer with a point-mass spectrum")
    sweep.add_argument("--p", type=int, help="Simulation dimension")
    sweep.add_argument("--trials", type=int, help="Simulation trials per point")
    sweep.add_argument("--delta-resolution", dest="delta_resolution", type=int)

    subcommands.add_parser("predict", parents=[common, sweep], help="Asymptotic predictions")
    subcommands.add_parser("phase", parents=[common, sweep], help="Phase-diagram table")
    subcommands.add_parser("simulate", parents=[common, sweep], help="Predictions against simulations")
    plot = subcommands.add_parser("plotdata", parents=[common], help="Split a result table into curve files")
    plot.add_argument("result", help="Result table written by predict, phase or simulate")

    return parser


def _load_sweep_dict(args: argparse.Namespace) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            data = json.load(handle)

    base = dict(data.get("base", {}))
    for flag, key in _SPEC_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            base[key] = value
    if args.delta is not None:
        base["transfer"] = {"mode": "hard", "delta": args.delta}
    if args.beta_t is not None:
        base["transfer"] = {"mode": "soft", "spectrum": {"kind": "point_mass", "mu0": args.beta_t}}
    data["base"] = base

    for key in ("sweep_axis", "alpha_s_ratio", "delta_resolution"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.grid is not None:
        start, stop, count = args.grid
        data["grid"] = {"start": start, "stop": stop, "count": int(count)}
    if args.out is not None:
        data["out_path"] = args.out
    if args.format is not None:
        data["format"] = args.format
    elif args.out is not None and "format" not in data:
        data["format"] = format_from_path(args.out).value

    sim = dict(data.get("sim") or {})
    for flag, key in (("seed", "master_seed"), ("p", "p"), ("trials", "n_trials")):
        value = getattr(args, flag)
        if value is not None:
            sim[key] = value
    if sim or args.command == "simulate":
        data["sim"] = sim

    if "grid" not in data:
        axis = data.get("sweep_axis", "rho")
        value = _axis_value(base, axis)
        data["grid"] = {"start": value, "stop": value, "count": 1}
    return data


def _axis_value(base: Dict[str, Any], axis: str) -> float:
    if axis in ("alpha_t", "rho", "lambda"):
        return float(base.get(axis, 1.0 if axis == "rho" else 0.0))
    transfer = base.get("transfer", {})
    if axis == "delta":
        return float(transfer.get("delta", 0.0))
    return float(transfer.get("spectrum", {}).get("mu0", transfer.get("spectrum", {}).get("beta_t", 0.0)))


def load_sweep(args: argparse.Namespace) -> SweepConfig:
    """Sweep configuration: flags override the file; every grid spec is validated"""
    try:
        sweep = SweepConfig.model_validate(_load_sweep_dict(args))
    except ValidationError as exc:
        raise SpecValidationError([error["msg"] for error in exc.errors()]) from exc

    violations: List[str] = []
    for x, spec in sweep.specs():
        violations.extend(f"{sweep.sweep_axis}={x:g}: {message}" for message in check_spec(spec))
    if violations:
        raise SpecValidationError(violations)
    return sweep


def _apply_runtime(args: argparse.Namespace) -> AppConfig:
    config = get_app_config()
    update: Dict[str, Any] = {}
    if args.jobs is not None:
        update["jobs"] = args.jobs
    if args.deterministic:
        update["deterministic"] = True
    if args.log_level:
        update["logging"] = config.logging.model_copy(update={"level": args.log_level.upper()})
    if update:
        config = set_app_config(config.model_copy(update=update))
    configure_logging(config.logging)
    return config


async def _write(table: ResultTable, sweep: SweepConfig, config: AppConfig) -> int:
    repository = repository_for(sweep.format, config.deterministic)
    await repository.save_table(table.frame, sweep.out_path, sweep.model_dump(mode="json", by_alias=True))
    if not table.ok:
        logger.warning("%d of %d rows failed", table.failed, len(table.frame))
        return EXIT_FAILED_ROWS
    return EXIT_OK


async def cmd_predict(sweep: SweepConfig, config: AppConfig) -> int:
    table = await get_service(PredictionService).predict(sweep, config.jobs)
    return await _write(table, sweep, config)


async def cmd_phase(sweep: SweepConfig, config: AppConfig) -> int:
    table = await get_service(PhaseService).phase(sweep, config.jobs)
    return await _write(table, sweep, config)


async def cmd_simulate(sweep: SweepConfig, config: AppConfig) -> int:
    table = await get_service(SimulationService).simulate(sweep, config.jobs)
    return await _write(table, sweep, config)


async def cmd_plotdata(result: str, out_dir: Optional[str], config: AppConfig) -> int:
    service = PlotDataService(repository_for(format_from_path(result), config.deterministic))
    await service.split(result, out_dir or "plotdata")
    return EXIT_OK


_SWEEP_COMMANDS = {
    "predict": cmd_predict,
    "phase": cmd_phase,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = _apply_runtime(args)

    try:
        if args.command == "plotdata":
            return asyncio.run(cmd_plotdata(args.result, args.out, config))
        sweep = load_sweep(args)
        return asyncio.run(_SWEEP_COMMANDS[args.command](sweep, config))
    except (SpecValidationError, UnsupportedConfigurationError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TransferLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED_ROWS


if __name__ == "__main__":
    sys.exit(main())
