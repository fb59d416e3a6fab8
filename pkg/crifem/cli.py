# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import argparse
import sys

from .config import RunConfig, parse_config, help_text
from .errors import CrifemError, ConfigError, ExportError
from .log import logger
from .study import ConvergenceStudy

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crifem",
        description="Stabilized P1-nonconforming immersed finite element solver "
            "for planar elasticity interface problems.")
    parser.add_argument("--config", metavar="PATH", help="key=value configuration file")
    parser.add_argument("--example", metavar="ID", help="built-in experiment (1a, 1b, 2a, 2b, 3a, 3b, 4)")
    parser.add_argument("--k-min", type=int, metavar="N")
    parser.add_argument("--k-max", type=int, metavar="N")
    parser.add_argument("--tau", type=float, metavar="X")
    parser.add_argument("--edge-set", choices=["interior", "all"])
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--threads", type=int, metavar="N")
    parser.add_argument("--solver", choices=["cg", "dense"])
    parser.add_argument("--tol", type=float, metavar="X")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
        help="set any configuration key, may be repeated")
    parser.add_argument("--help-config", action="store_true", help="list configuration keys and exit")
    parser.add_argument("--quiet", action="store_true", help="print results only")
    parser.add_argument("--no-color", action="store_true", help="disable ANSI colors")
    parser.add_argument("--debug", action="store_true", help="print debug messages")
    return parser

def flags_from_args(args) -> dict:
    flags = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(item, "--set expects KEY=VALUE")
        key, value = item.split("=", 1)
        flags[key.strip()] = value.strip()
    for key in ("example", "k_min", "k_max", "tau", "edge_set", "out", "threads", "solver", "tol"):
        value = getattr(args, key)
        if value is not None:
            flags[key] = value
    return flags

def run(config: RunConfig) -> int:
    """Runs a study and returns the process exit code."""
    try:
        with ConvergenceStudy(config) as study:
            study.run()
    except CrifemError as e:
        logger.log("error", str(e))
        return e.exit_code
    except OSError as e:
        logger.log("error", str(e))
        return ExportError.exit_code
    return 0

def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logger.configure(log_levels=not args.quiet, log_fancy=not args.no_color, debug=args.debug)
    if args.help_config:
        print(help_text())
        return 0
    try:
        config = parse_config(args.config, flags_from_args(args))
        tau = config.stabilization().tau
    except CrifemError as e:
        logger.log("error", str(e))
        return e.exit_code
    logger.log("info", f"example {config.example or 'custom'}, levels {config.k_min}..{config.k_max}, tau={tau:g}")
    return run(config)

if __name__ == "__main__":
    sys.exit(main())
