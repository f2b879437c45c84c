"""
Run configuration: INI file sections, command-line flags, validation.

Precedence is defaults < RQENTROPY_* environment < config file < flags.
Each flag mirrors the config key of the same name (dashes for
underscores) in the section it belongs to.
"""
import argparse
import configparser
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, get_args

from pydantic import ValidationError

from app.cli.schemas import SECTIONS, Command, RunConfig
from app.errors import ConfigError
from app.experiments.sweeps import WHITE_NOISE_SIDES

# Extra spellings for a few flags.
FLAG_ALIASES = {
    "noise": ("signal", "noise_frac"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rqentropy",
        description="Recurrence plots, classic RQA and microstate recurrence entropy.",
        epilog=(
            "Every flag has a config-file key with the same name (underscores instead of dashes) "
            "in the section shown above it. Environment variables prefixed RQENTROPY_ "
            "(e.g. RQENTROPY_THREADS, RQENTROPY_OUTPUT_DIR) set the defaults."
        ),
        allow_abbrev=False,
    )
    parser.add_argument("command", choices=get_args(Command), help="what to run")
    parser.add_argument("--config", default=None, help="INI file with [run], [signal], ... sections")
    for section, model in SECTIONS.items():
        group = parser.add_argument_group(f"[{section}]")
        for name, field in model.model_fields.items():
            if name == "command":
                continue
            flags = [f"--{name.replace('_', '-')}"]
            flags += [f"--{alias}" for alias, target in FLAG_ALIASES.items() if target == (section, name)]
            kwargs: Dict[str, Any] = {"dest": f"{section}.{name}", "default": argparse.SUPPRESS, "help": field.description}
            if field.annotation is bool:
                kwargs["action"] = "store_true"
            else:
                kwargs["metavar"] = name.upper()
            group.add_argument(*flags, **kwargs)
    return parser


def read_config_file(path: Path) -> Dict[str, Dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open("r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}")
    except configparser.Error as exc:
        raise ConfigError("config", f"malformed config file {path}: {exc}")

    data: Dict[str, Dict[str, str]] = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(section, f"unknown section, expected one of {sorted(SECTIONS)}")
        data[section] = dict(parser.items(section))
    return data


def _validation_key(exc: ValidationError) -> str:
    first = exc.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "config"


def load_run_config(args: argparse.Namespace) -> RunConfig:
    data: Dict[str, Dict[str, Any]] = {section: {} for section in SECTIONS}
    if args.config:
        for section, values in read_config_file(Path(args.config)).items():
            data[section].update(values)
    for key, value in vars(args).items():
        if "." in key:
            section, name = key.split(".", 1)
            data[section][name] = value
    data["run"]["command"] = args.command

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_validation_key(exc), exc.errors()[0]["msg"])

    if config.run.command == "sweep" and config.run.experiment is None:
        raise ConfigError("run.experiment", "sweep needs an experiment (white_noise, sine, logistic, lorenz)")
    if config.run.experiment == "white_noise" and any(n not in WHITE_NOISE_SIDES for n in config.microstates.n_list):
        raise ConfigError("microstates.n_list", f"the white-noise sweep supports n in {list(WHITE_NOISE_SIDES)}")
    if config.signal.kind == "lorenz" or config.run.experiment == "lorenz":
        try:
            config.signal.lorenz_params()
        except ValidationError as exc:
            raise ConfigError(f"signal.{_validation_key(exc)}", exc.errors()[0]["msg"])
    return config


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    return load_run_config(build_parser().parse_args(argv))
