"""
Command line runner: `zagff <greens|verify|extremes|sample> [flags]`.

Stdout carries one JSON document (the command summary, or `{"error": ...}`);
logs go to stderr. Exit codes: 0 success, 1 acceptance failure, 2 usage or
validation error, 3 any other error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..core.exceptions import UnsupportedDimensionError, ValidationError, ZAGFFError
from ..core.logging_config import get_logger, set_log_level
from .commands import COMMANDS
from .config import ExperimentConfig, build_config, load_config_file
from .output import RunDirectory, dumps

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ACCEPTANCE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_ACCEPTANCE", "EXIT_USAGE", "EXIT_INTERNAL"]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors share the error JSON."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ValidationError(f"Usage error: {message}", details={"usage": self.format_usage().strip()})


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=None, help="Dimension (default 3)")
    p.add_argument("--seed", type=int, default=None, help="Master seed (default 0)")
    p.add_argument("--config", type=Path, default=None, help="JSON config file; flags override it")
    p.add_argument("--out", type=Path, default=None, help="Output directory (default runs/<command>-<digest>); must be empty or hold a run of the same config")
    p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zagff", description="Zero-average Gaussian free field on the discrete torus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    greens = sub.add_parser("greens", help="Green tables, decay profiles and convergence report")
    _add_common(greens)
    greens.add_argument("--n", type=int, default=None, help="Side length")
    greens.add_argument("--n-list", type=_int_list, default=None, help="Side lengths, e.g. 4,8,16")

    verify = sub.add_parser("verify", help="Identity and oracle checks")
    _add_common(verify)
    verify.add_argument("--mc-replicates", type=int, default=None, help="Walks of the exit-time check")
    verify.add_argument("--inject-fault", action="store_true", default=None, help="Perturb G(0,0) by 1e-3")

    extremes = sub.add_parser("extremes", help="Gumbel, Poisson, Laplace and boundary experiments")
    _add_common(extremes)
    extremes.add_argument("--n", type=int, default=None, help="Side length")
    extremes.add_argument("--replicates", type=int, default=None, help="Monte Carlo replicates (>= 100)")
    extremes.add_argument("--delta", type=float, default=None, help="Exceedance level")
    extremes.add_argument("--floor", type=float, default=None, help="Point-pattern floor")
    extremes.add_argument("--split", type=_int_list, default=None, help="Cells per axis, e.g. 2,1,1")
    extremes.add_argument("--laplace-c", type=float, default=None, help="Height of the Laplace test function")
    extremes.add_argument("--beta", type=float, default=None, help="Bulk exponent in (1/2, 1)")
    extremes.add_argument("--report-only", action="store_true", default=None, help="Exit 0 on failed bands")

    sample = sub.add_parser("sample", help="Write sampled fields")
    _add_common(sample)
    sample.add_argument("--n", type=int, default=None, help="Side length")
    sample.add_argument("--count", type=int, default=None, help="Number of fields")
    sample.add_argument("--format", choices=["binary", "csv"], default=None)

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    flags = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "config", "out", "log_level")
    }
    config = build_config(args.command, load_config_file(args.config), flags)
    if config.d < 3:
        raise UnsupportedDimensionError(
            f"Dimension d={config.d} is not supported; the field needs d >= 3", details={"d": config.d}
        )
    return config


def _emit(payload: dict) -> None:
    sys.stdout.write(dumps(payload))
    sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one CLI command.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        int: Exit code
    """
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            set_log_level(args.log_level.upper())
        config = _config_from_args(args)
        out = RunDirectory(config, args.out)
        result = COMMANDS[config.command](config, out)
    except ValidationError as e:
        logger.error("%s: %s", e.kind, e.message)
        _emit({"error": e.to_dict()})
        return EXIT_USAGE
    except ZAGFFError as e:
        logger.error("%s: %s", e.kind, e.message)
        _emit({"error": e.to_dict()})
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception("Unexpected failure")
        _emit({"error": {"kind": "internal-error", "message": str(e), "details": {}}})
        return EXIT_INTERNAL

    failed = sorted(name for name, ok in result.acceptance.items() if not ok)
    _emit(
        {
            "command": config.command,
            "output_dir": str(out.path),
            "passed": result.passed,
            "failed": failed,
            "summary": result.summary,
        }
    )
    if not result.passed:
        logger.warning("%s finished with %d failed acceptance flags: %s", config.command, len(failed), failed)
        return EXIT_ACCEPTANCE
    logger.info("%s finished", config.command)
    return EXIT_OK
