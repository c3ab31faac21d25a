#!/usr/bin/env python

import sys
import logging
import importlib
from dataclasses import dataclass, field

from joblib import parallel_config

from zetacensus.tasks import utils
from zetacensus.tasks.mpc_eval import PrecisionContext
from zetacensus.tasks.utils import ConfigError, ZetaCensusError
from zetacensus.tasks.zero_census import Rect


COMMANDS = ("eval", "zeros", "count", "census", "audit", "args")

# which options each command cannot run without
REQUIRED = {
    "eval": ("fn", "s"),
    "zeros": ("rect",),
    "count": ("t|grid",),
    "census": ("grid",),
    "audit": ("condition",),
    "args": ("t|grid",),
}

# flags each command reads, on top of COMMON_OPTIONS
OPTIONS = {
    "eval": ("fn", "s", "k"),
    "zeros": ("rect", "target", "k"),
    "count": ("k", "t", "grid", "seed_perturbation"),
    "census": ("grid", "u", "seed_perturbation"),
    "audit": ("condition", "rect", "step"),
    "args": ("t", "grid", "sigmas", "seed_perturbation"),
}

COMMON_OPTIONS = ("precision_bits", "guard_bits", "threads", "format", "out", "log", "debug", "timestamps")

USAGE = """usage: zc-run COMMAND [--flag=value ...]

commands:
  eval    --fn NAME --s COMPLEX [--k K]
  zeros   --rect smin,smax,tmin,tmax [--target zeta|zeta2]
  count   --k 0|2 --T T
  census  --grid T1,T2,... [--U U]
  audit   --condition C1|C2|C3|C4|C5|L23|L25|L26 [--rect smin,smax,tmin,tmax] [--step H]
  args    --T T|--grid T1,T2,... [--sigmas s1,s2,...]

common flags:
  --precision-bits N --guard-bits N --threads N --format csv|json --out PATH
  --log debug|info|warn|error --debug --timestamps
"""


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision_bits: int = 192
    guard_bits: int = 16
    rect: Rect = None
    t_grid: tuple = None
    k: int = None
    format: str = "csv"
    out_path: str = None
    seed_perturbation: float = 0.0
    window: float = None
    threads: int = -1
    options: dict = field(default_factory=dict)

    @classmethod
    def from_options(cls, command, options):
        if command not in COMMANDS:
            raise ConfigError("Unknown command %r (expected one of %s)" % (command, ", ".join(COMMANDS)))
        unknown = sorted(key for key in options if key not in OPTIONS[command] + COMMON_OPTIONS)
        if unknown:
            raise ConfigError("%s does not take %s" % (command, ", ".join("--" + key.replace("_", "-") for key in unknown)))
        for needed in REQUIRED[command]:
            keys = needed.split("|")
            if not any(key in options and options[key] is not True for key in keys):
                raise ConfigError("%s needs --%s" % (command, " or --".join(keys)))

        rect = None
        if "rect" in options:
            rect = Rect.from_string(options["rect"])

        t_grid = None
        if "grid" in options:
            t_grid = tuple(utils.parse_floats(options["grid"]))
        elif "t" in options:
            t_grid = tuple(utils.parse_floats(options["t"], 1))
        if t_grid is not None and not t_grid:
            raise ConfigError("empty T grid")

        output_format = options.get("format", "csv")
        if output_format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json, got %r" % (output_format,))

        return cls(
            command=command,
            precision_bits=_integer(options, "precision_bits", utils.setting("precision", "mantissa_bits", 192)),
            guard_bits=_integer(options, "guard_bits", utils.setting("precision", "guard_bits", 16)),
            rect=rect,
            t_grid=t_grid,
            k=_integer(options, "k", None),
            format=output_format,
            out_path=options.get("out", None),
            seed_perturbation=_real(options, "seed_perturbation", 0.0),
            window=_real(options, "u", None),
            threads=_integer(options, "threads", -1),
            options=options,
        )

    def context(self):
        try:
            return PrecisionContext.from_config(self.precision_bits, self.guard_bits)
        except ZetaCensusError as exception:
            raise ConfigError(str(exception))

    def heights(self):
        return [T + self.seed_perturbation for T in self.t_grid]

    def output_options(self):
        return {"format": self.format, "out": self.out_path}


def _integer(options, key, default):
    if key not in options:
        return default
    try:
        return int(options[key])
    except (TypeError, ValueError):
        raise ConfigError("--%s must be an integer, got %r" % (key.replace("_", "-"), options[key]))


def _real(options, key, default):
    if key not in options:
        return default
    try:
        return float(options[key])
    except (TypeError, ValueError):
        raise ConfigError("--%s must be a number, got %r" % (key.replace("_", "-"), options[key]))


def parse_options(args):
    # --key=value, --key value and bare --flag, keys lowercased with
    # hyphens folded to underscores
    options = {}
    i = 0
    while i < len(args):
        arg = args[i]
        i += 1
        if not arg.startswith("--"):
            raise ConfigError("Unexpected argument %r" % arg)

        if "=" in arg:
            key, value = arg.split('=', 1)
        elif i < len(args) and not args[i].startswith("--"):
            key, value = arg, args[i]
            i += 1
        else:
            key, value = arg, True

        key = key[2:].lower().replace("-", "_")
        if value == 'True':
            value = True
        elif value == 'False':
            value = False
        options[key] = value
    return options


def configure_logging(options):
    if options.get('debug', False):
        log_level = "debug"
    else:
        log_level = options.get("log", "warn")

    if log_level not in ["debug", "info", "warn", "error"]:
        raise ConfigError("Invalid log level (specify: debug, info, warn, error).")
    if log_level == "warn":
        log_level = "warning"

    if options.get('timestamps', False):
        logging.basicConfig(format='%(asctime)s %(message)s', level=log_level.upper())
    else:
        logging.basicConfig(format='%(message)s', level=log_level.upper())


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]

    # name of the command comes first
    if not argv or argv[0].startswith("--"):
        sys.stderr.write(USAGE)
        return 1
    command = argv[0]

    try:
        options = parse_options(argv[1:])
        configure_logging(options)
        config = RunConfig.from_options(command, options)
    except ConfigError as exception:
        sys.stderr.write("%s\n\n%s" % (exception, USAGE))
        return 1

    try:
        task = importlib.import_module("zetacensus.tasks." + command)
        with parallel_config(backend="threading", n_jobs=config.threads):
            task.run(config)
    except ConfigError as exception:
        sys.stderr.write("%s\n\n%s" % (exception, USAGE))
        return 1
    except ZetaCensusError as exception:
        logging.error("%s: %s" % (type(exception).__name__, exception))
        return utils.exit_code_for(exception)
    except Exception as exception:
        utils.admin(exception)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
