"""
Command-line interface.

Subcommands: ``test``, ``diagnose``, ``simulate`` and ``verify``.
Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 data or computation error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .bootstrap import BootstrapConfig, wild_bootstrap_test
from .diagnostics import MODELS, residual_bootstrap_test
from .errors import AutoHSICError, ConfigError, ShapeMismatch
from .simulation import dgp as dgps
from .simulation.experiment import ExperimentConfig, run_experiment
from .simulation.presets import PRESETS, preset
from .spaces import KernelSpec
from .verify import run_verification

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


def _apply_overrides(config: dict, args) -> dict:
    if args.seed is not None:
        config["seed"] = args.seed
    if args.threads is not None:
        config["threads"] = args.threads
    if args.output is not None:
        config["output"] = args.output
    return config


def _emit(text: str, config: dict, filename: str):
    out = config.get("output")
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / filename).write_text(text, encoding="utf-8")


def _print_report(report, config: dict, fmt: str):
    data = io.report_to_dict(report, config["include_replicates"])
    text = io.dumps_report(data)
    _emit(text, config, "report.json")
    _emit(io.format_summary(report), config, "summary.txt")
    sys.stdout.write(text if fmt == "records" else io.format_summary(report))


def cmd_test(args) -> int:
    config = _apply_overrides(io.load_config(args.config, "test"), args)
    series = io.read_series(args.series)
    k, l = io.kernel_specs(config)
    cfg = BootstrapConfig(B=config["B"], alpha=config["alpha"],
                          seed=config["seed"])
    report = wild_bootstrap_test(series, k, l, config["M"], cfg)
    _print_report(report, config, args.format)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    config = _apply_overrides(io.load_config(args.config, "diagnose"), args)
    series = io.read_series(args.series)
    if series.space.size != 1:
        raise ConfigError(f"model {config['model']} requires a scalar series, "
                          f"got element size {series.space.size}")
    k, l = io.kernel_specs(config)
    cfg = BootstrapConfig(B=config["B"], alpha=config["alpha"],
                          seed=config["seed"])
    report = residual_bootstrap_test(series, MODELS[config["model"]](), k, l,
                                     config["M"], cfg, config["burn_in"],
                                     config["threads"])
    _print_report(report, config, args.format)
    return EXIT_OK


def dgp_from_config(spec: dict):
    """Build a DGP from its config mapping (``{"type": ..., params}``)."""
    spec = dict(spec)
    kind = spec.pop("type")
    if "innovation" in spec or "df" in spec:
        law = spec.pop("innovation", "normal")
        df = spec.pop("df", None)
        if law == "t" and df is None:
            raise ConfigError("innovation 't' needs 'df'")
        spec["innovation"] = dgps.Innovation(law, df if law == "t" else None)
    cls = dgps.DGP_TYPES[kind]
    try:
        return cls(**spec)
    except TypeError as exc:
        raise ConfigError(f"dgp {kind}: {exc}")


def _simulation_configs(config: dict) -> tuple[str, list[ExperimentConfig]]:
    kernels = tuple(KernelSpec(k) for k in config["kernels"])
    if config.get("preset"):
        if "dgp" in config:
            raise ConfigError("give either 'preset' or 'dgp', not both")
        name = config["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from "
                              f"{', '.join(PRESETS)}")
        return name, preset(name, R=config["R"], B=config["B"],
                            seed=config["seed"], workers=config["threads"],
                            grid_points=config["grid_points"], kernels=kernels)
    if "dgp" not in config or "T" not in config:
        raise ConfigError("simulate needs a 'preset', or a 'dgp' and 'T'")
    dgp = dgp_from_config(config["dgp"])
    cfg = ExperimentConfig(dgp, config["T"], R=config["R"], B=config["B"],
                           alpha=config["alpha"], lags=tuple(config["lags"]),
                           portmanteau=tuple(config["portmanteau"]),
                           kernels=kernels, seed=config["seed"],
                           workers=config["threads"])
    return dgp.name, [cfg]


def cmd_simulate(args) -> int:
    config = _apply_overrides(io.load_config(args.config, "simulate"), args)
    if args.preset is not None:
        config["preset"] = args.preset
    if args.replications is not None:
        config["R"] = args.replications
    if args.bootstrap is not None:
        config["B"] = args.bootstrap
    name, configs = _simulation_configs(config)
    text, records = [], []
    for cfg in configs:
        table = run_experiment(cfg)
        text.append(table.to_text())
        records.append(table.to_records())
    text_out, records_out = "\n".join(text), "".join(records)
    _emit(text_out, config, f"{name}.txt")
    _emit(records_out, config, f"{name}.jsonl")
    sys.stdout.write(records_out if args.format == "records" else text_out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verification()
    for res in results:
        print(res.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autohsic",
        description="Kernel tests of serial independence for vector, matrix "
                    "and functional time series.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, series: bool):
        if series:
            p.add_argument("series", help="series file")
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--seed", type=int, metavar="U64")
        p.add_argument("--threads", type=int, metavar="N")
        p.add_argument("--output", metavar="DIR")
        p.add_argument("--format", choices=("text", "records"), default="text")

    common(sub.add_parser("test", help="wild bootstrap serial independence test"),
           True)
    common(sub.add_parser("diagnose", help="residual bootstrap model diagnostic"),
           True)
    sim = sub.add_parser("simulate", help="Monte Carlo rejection-rate tables")
    common(sim, False)
    sim.add_argument("--preset", metavar="NAME", help=", ".join(PRESETS))
    sim.add_argument("-R", "--replications", type=int, metavar="N")
    sim.add_argument("-B", "--bootstrap", type=int, metavar="N")
    sub.add_parser("verify", help="run the numerical self-checks")
    return parser


COMMANDS = {"test": cmd_test, "diagnose": cmd_diagnose,
            "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"autohsic: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AutoHSICError, ShapeMismatch) as exc:
        print(f"autohsic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
