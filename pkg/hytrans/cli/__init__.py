__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import argparse
import dataclasses
import sys
from typing import List, Optional, Tuple

import hytrans
from hytrans.config import RunConfig, load_run_config
from hytrans.errors import HytransError, ValidationError
from hytrans.logger import logger, setup_logger
from hytrans.molecule import Molecule


def get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Hydrogen-transfer microscale NMR simulator with NV readout",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--debug", action="store_true", help="debug level logging")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument("--nocolor", action="store_true", help="do not colorize output")
    parser.add_argument(
        "--version", action="store_true", help="print the version and exit"
    )

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--molecule", help="molecule document or packaged name (hcn, pch33)")
    shared.add_argument("--config", help="run configuration document")
    shared.add_argument("--seed", type=int, help="top-level random seed")
    shared.add_argument("--out", help="output directory")

    subparsers = parser.add_subparsers(
        title="actions", dest="command", description="actions"
    )

    simulate = subparsers.add_parser(
        "simulate", parents=[shared], help="simulate traces, spectra and peaks"
    )
    simulate.add_argument(
        "--mode",
        choices=["transfer", "standard", "both"],
        default="transfer",
        help="protocol to simulate",
    )
    simulate.add_argument(
        "--no-pi-pulses",
        dest="no_pi_pulses",
        action="store_true",
        help="keep chemical shifts (no loading pi pulses)",
    )

    sensitivity = subparsers.add_parser(
        "sensitivity", parents=[shared], help="predict (and measure) the sensitivity ratio"
    )
    sensitivity.add_argument(
        "--sweep-t2nv", dest="sweep_t2nv", help="NV coherence sweep LO:HI:N (seconds)"
    )
    sensitivity.add_argument("--seeds", type=int, help="Monte Carlo noise realizations")
    sensitivity.add_argument("--workers", type=int, help="worker processes")
    sensitivity.add_argument("--m-max", dest="m_max", type=int, help="largest M searched")

    validate = subparsers.add_parser(
        "validate", parents=[shared], help="compare engines against each other"
    )
    validate.add_argument(
        "--random", type=int, default=0, help="also check N seeded random molecules"
    )
    validate.add_argument(
        "--corrupt-j",
        dest="corrupt_j",
        action="store_true",
        help="corrupt one coupling in the explicit engine (must FAIL)",
    )
    return parser


def prepare(args) -> Tuple[RunConfig, Molecule]:
    """
    Build the run configuration from --config and the flags that override
    it, load the molecule and fill in a missing sequence.
    """
    if args.config:
        config = load_run_config(args.config)
        if args.molecule:
            config = config.replace(molecule=args.molecule, source_dir=None)
    elif args.molecule:
        config = RunConfig(molecule=args.molecule)
    else:
        raise ValidationError("Either --molecule or --config is required")
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    molecule = config.load_molecule()
    config = config.resolve(molecule)
    if getattr(args, "no_pi_pulses", False):
        config = config.replace(
            sequence=dataclasses.replace(config.sequence, with_pi_pulses=False)
        )
    return config, molecule


def header(config: RunConfig, *extra: str) -> List[str]:
    """
    Metadata lines opening every output file.
    """
    return [
        f"hytrans {hytrans.__version__}",
        f"config={config.config_hash()}",
        f"seed={config.seed}",
    ] + list(extra)


def main(argv: Optional[List[str]] = None) -> int:
    parser = get_parser()
    args = parser.parse_args(argv)

    if args.version:
        print(hytrans.__version__)
        return 0

    setup_logger(quiet=args.quiet, nocolor=args.nocolor, debug=args.debug)

    if args.command == "simulate":
        from .simulate import main as run
    elif args.command == "sensitivity":
        from .sensitivity import main as run
    elif args.command == "validate":
        from .validate import main as run
    else:
        parser.print_help()
        return 1

    try:
        return run(args, parser)
    except HytransError as e:
        logger.exit(str(e), e.exit_code)
    except FileNotFoundError as e:
        logger.exit(str(e), 2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
