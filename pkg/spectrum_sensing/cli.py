"""
cli.py
Command line entry point: synthesis, single-shot detection, compressive
recovery and the seeded experiments.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from spectrum_sensing import __version__
from spectrum_sensing.config import settings
from spectrum_sensing.errors import ConfigError, SensingError
from spectrum_sensing.repositories.implementations.file_repo import FileResultRepo
from spectrum_sensing.services.harness import FALSE_EDGE_DEFAULTS, ExperimentHarness

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

logger = logging.getLogger("spectrum_sensing.cli")


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise ConfigError instead of exiting with status 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI experiment configuration file")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one configuration key (repeatable, 'section.key' accepted)",
    )
    common.add_argument("--out", type=Path, default=Path("out"), help="Output directory")
    common.add_argument("--seed", type=int, help="Master seed (overrides master_seed)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _ArgumentParser(
        prog="spectrum-sensing",
        description="Multiband spectrum sensing toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    commands.add_parser("generate", parents=[common], help="Synthesize a wideband PSD")

    detect = commands.add_parser("detect", help="Single-shot detection")
    detect_kinds = detect.add_subparsers(dest="kind", required=True, parser_class=_ArgumentParser)
    detect_kinds.add_parser("energy", parents=[common], help="Per-channel energy detection")
    edges = detect_kinds.add_parser("edges", parents=[common], help="Wavelet edge detection")
    edges.add_argument("--psd", type=Path, help="PSD text file (synthesized when omitted)")

    cs = commands.add_parser("cs", help="Compressive sensing")
    cs_kinds = cs.add_subparsers(dest="kind", required=True, parser_class=_ArgumentParser)
    cs_kinds.add_parser("recover", parents=[common], help="Reconstruct and detect")

    experiment = commands.add_parser("experiment", help="Seeded Monte-Carlo experiments")
    experiments = experiment.add_subparsers(
        dest="kind", required=True, parser_class=_ArgumentParser
    )
    for name, text in (
        ("rmse-beta", "Edge RMSE versus roll-off factor"),
        ("false-edge", "Impulsive-noise false edge demonstration"),
        ("roc", "Energy detector P_d versus P_fa"),
        ("cs-tradeoff", "Compression ratio trade-off"),
    ):
        experiments.add_parser(name, parents=[common], help=text)
    return parser


def parse_overrides(items: Sequence[str]) -> Dict[str, str]:
    overrides: Dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"Override '{item}' is not of the form key=value")
        overrides[key.strip()] = value.strip()
    return overrides


def _run(args: argparse.Namespace, harness: ExperimentHarness, config) -> None:
    out = Path(args.out)
    command = (args.command, getattr(args, "kind", None))
    if command == ("generate", None):
        harness.generate(config, out)
    elif command == ("detect", "energy"):
        harness.detect_energy(config, out)
    elif command == ("detect", "edges"):
        harness.detect_edges(config, out, args.psd)
    elif command == ("cs", "recover"):
        asyncio.run(harness.cs_recover(config, out))
    elif command == ("experiment", "rmse-beta"):
        asyncio.run(harness.run_rmse_beta(config, out))
    elif command == ("experiment", "false-edge"):
        asyncio.run(harness.run_false_edge_demo(config, out))
    elif command == ("experiment", "roc"):
        asyncio.run(harness.run_roc(config, out))
    elif command == ("experiment", "cs-tradeoff"):
        asyncio.run(harness.run_cs_tradeoff(config, out))
    else:
        raise ConfigError(f"Unknown command {command}")


def cli_main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.loglevel,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    repo = FileResultRepo()
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:
            # --help and --version
            return EXIT_OK if not e.code else EXIT_CONFIG
        overrides = parse_overrides(args.overrides)
        if args.seed is not None:
            overrides["master_seed"] = str(args.seed)
        defaults = (
            FALSE_EDGE_DEFAULTS
            if (args.command, getattr(args, "kind", None)) == ("experiment", "false-edge")
            else None
        )
        config = repo.load_config(args.config, overrides, defaults)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG

    harness = ExperimentHarness(repo)
    try:
        _run(args, harness, config)
    except (ConfigError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except (SensingError, ValueError, OSError) as e:
        logger.error(f"Run failed: {e}")
        return EXIT_RUNTIME
    logger.info(f"Outputs written to {args.out}")
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
