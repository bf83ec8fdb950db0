import argparse
import sys
from collections.abc import Sequence

from loguru import logger

from app.commands import COMMANDS
from app.config import load_settings
from components.kernels.constants import KERNEL_ORDERS
from components.lab.constants import DEFAULT_SEED, DEFAULT_SIGMA, DEFAULT_TOLERANCE
from components.spectral import BUILTIN_TARGETS, PRIOR_TARGET, TABLE_ROWS
from components.spectral.constants import DEFAULT_MAX_FREQUENCY, DEFAULT_QUAD_NODES
from utils.errors import CellFailure, ConfigError, GpLabError
from utils.logging import configure_logging

EXIT_NUMERIC = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

TARGET_CHOICES = (*TABLE_ROWS, PRIOR_TARGET, *sorted(BUILTIN_TARGETS))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        msg = f"invalid int value: {text!r}"
        raise argparse.ArgumentTypeError(msg) from None
    if value < 1:
        msg = f"must be a positive integer, got {value}"
        raise argparse.ArgumentTypeError(msg)
    return value


def _add_kernel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", required=True, choices=sorted(KERNEL_ORDERS), help="arc-cosine kernel order")
    parser.add_argument("--bias", choices=("on", "off"), default="off", help="hidden-layer biases (default: off)")


def _add_target_flag(parser: argparse.ArgumentParser, choices: Sequence[str] = TARGET_CHOICES) -> None:
    parser.add_argument(
        "--target",
        required=True,
        choices=choices,
        help="table row f1..f4 for the kernel, 'prior' for a draw from the GP prior, or a built-in target name",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for prior draws and sampled inputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gp-lab",
        description="Exact GP regression on the circle: spectra, learning-curve rates and Monte-Carlo experiments.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    spectrum = subparsers.add_parser("spectrum", help="Mercer spectrum of a kernel; prints the fitted alpha")
    _add_kernel_flags(spectrum)
    spectrum.add_argument("--max-freq", type=int, default=DEFAULT_MAX_FREQUENCY, help="highest frequency resolved")
    spectrum.add_argument("--quad", type=int, default=DEFAULT_QUAD_NODES, help="trapezoid quadrature nodes")
    spectrum.add_argument("--out", help="spectrum CSV path (a JSON summary is written next to it)")

    targets = subparsers.add_parser("targets", help="expansion of a target in the kernel eigenbasis")
    _add_kernel_flags(targets)
    _add_target_flag(targets)
    targets.add_argument("--max-freq", type=int, default=DEFAULT_MAX_FREQUENCY, help="highest frequency resolved")
    targets.add_argument("--quad", type=int, default=DEFAULT_QUAD_NODES, help="trapezoid quadrature nodes")
    targets.add_argument("--out", help="expansion CSV path (rank,mu)")

    rates = subparsers.add_parser("rates", help="predicted learning-curve exponents as JSON")
    _add_kernel_flags(rates)
    _add_target_flag(rates)
    rates.add_argument("--t", type=float, default=0.0, help="noise schedule exponent, sigma^2 = n^t")
    rates.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="noise standard deviation")
    rates.add_argument("--out", help="also write the JSON here")

    theory = subparsers.add_parser("theory", help="deterministic leading-order learning curves")
    _add_kernel_flags(theory)
    _add_target_flag(theory)
    theory.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="noise standard deviation")
    theory.add_argument("--t", type=float, default=0.0, help="noise schedule exponent, sigma^2 = n^t")
    theory.add_argument("--n-min", type=_positive_int, default=2**8, help="smallest n (rounded down to a power of two)")
    theory.add_argument("--n-max", type=_positive_int, default=2**16, help="largest n (rounded down to a power of two)")
    theory.add_argument("--out", help="curve CSV path (n,f0_det,g_det,m_det)")

    run = subparsers.add_parser("run", help="Monte-Carlo learning curve from a JSON experiment config")
    run.add_argument("--config", required=True, help="experiment config JSON")
    run.add_argument("--out", required=True, help="learning-curve CSV path")
    run.add_argument("--threads", type=int, default=0, help="worker threads (default: GP_LAB_THREADS)")

    report = subparsers.add_parser("report", help="compare a learning curve with predicted rates")
    report.add_argument("--curve", required=True, help="learning-curve CSV written by 'run'")
    report.add_argument("--rates", required=True, help="rates JSON written by 'rates --out'")
    report.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="slope tolerance for power-law rows")
    report.add_argument("--out", help="also write the report JSON here")

    identity = subparsers.add_parser("identity-check", help="check G(D_n) = E F0(D_n+1) - F0(D_n) on one design")
    _add_kernel_flags(identity)
    _add_target_flag(identity, (*TABLE_ROWS, *sorted(BUILTIN_TARGETS)))
    identity.add_argument("--n", type=_positive_int, required=True, help="training set size")
    identity.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="noise standard deviation")
    identity.add_argument("--draws", type=int, default=0, help="noise draws; 0 takes the expectation in closed form")
    identity.add_argument("--quad", type=int, default=0, help="test-grid nodes (default: GP_LAB_QUAD_NODES)")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "theory" and args.n_min > args.n_max:
        parser.error(f"--n-min {args.n_min} exceeds --n-max {args.n_max}")
    try:
        settings = load_settings()
    except RuntimeError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings.log_level)

    try:
        return COMMANDS[args.command](args, settings)
    except ConfigError as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_USAGE
    except CellFailure as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_SOLVER
    except GpLabError as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
