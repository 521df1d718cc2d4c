import argparse
import logging
import sys

from traitlets import TraitError

from . import __version__
from .app import NoonSim
from .beamsplitter import ConventionError
from .fock import DomainError
from .postselect import OverlapExponentError, UnitarityError
from .search import Pairing
from .states import Family
from .sweeps import FIG1_ALPHA_MAX, FIG1_ALPHA_STEP

FAMILY_CHOICES = [f.value for f in Family]


def get_common_argparser():
    """Flags shared by every subcommand"""
    argparser = argparse.ArgumentParser(add_help=False)

    argparser.add_argument(
        "--config",
        default="noonsim_config.py",
        help="Path to config file for noonsim",
    )

    argparser.add_argument(
        "--json-logs",
        default=False,
        action="store_true",
        help="Emit JSON logs instead of human readable logs",
    )

    argparser.add_argument("--debug", help="Turn on debug logging", action="store_true")

    argparser.add_argument("--n-max", type=int, help=NoonSim.n_max.help)

    argparser.add_argument("--tail", type=float, help=NoonSim.tail.help)

    argparser.add_argument("--out", dest="output", help=NoonSim.output.help)

    argparser.add_argument("--jobs", type=int, help=NoonSim.jobs.help)

    argparser.add_argument("--gamma", help=NoonSim.gamma.help)

    return argparser


def _add_selection(parser):
    parser.add_argument(
        "--family",
        dest="families",
        action="append",
        choices=FAMILY_CHOICES,
        help="Input family, may be given several times. "
        "Defaults to ocs-cs and sv-cs.",
    )
    parser.add_argument(
        "--N",
        dest="photon_numbers",
        action="append",
        type=int,
        help="Post-selected photon number, may be given several times.",
    )


def get_argparser():
    """Get arguments that may be used by noonsim"""
    argparser = argparse.ArgumentParser(
        prog="noonsim",
        description="Simulate NOON-state generation by a beam splitter "
        "with post-selection",
    )

    argparser.add_argument(
        "--version",
        dest="version",
        action="store_true",
        help="Print the noonsim version and exit.",
    )

    common = get_common_argparser()
    subparsers = argparser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    sweep = subparsers.add_parser(
        "sweep",
        parents=[common],
        help="Fidelity and overlap over a grid of |alpha|, written as CSV",
    )
    _add_selection(sweep)
    sweep.add_argument("--alpha-min", type=float, help=NoonSim.alpha_min.help)
    sweep.add_argument("--alpha-max", type=float, help=NoonSim.alpha_max.help)
    sweep.add_argument("--alpha-step", type=float, help=NoonSim.alpha_step.help)
    sweep.add_argument(
        "--sv-pairing",
        choices=[p.value for p in Pairing],
        help=NoonSim.sv_pairing.help,
    )
    sweep.add_argument("--squeeze", type=float, help=NoonSim.squeeze.help)

    optimize = subparsers.add_parser(
        "optimize",
        parents=[common],
        help="Search the input amplitudes for the best NOON fidelity",
    )
    _add_selection(optimize)
    optimize.add_argument("--grid", type=int, help=NoonSim.grid.help)
    optimize.add_argument("--refine-iters", type=int, help=NoonSim.refine_iters.help)
    optimize.add_argument("--phase-grid", type=int, help=NoonSim.phase_grid.help)
    optimize.add_argument(
        "--amplitude-max", type=float, help=NoonSim.amplitude_max.help
    )

    fig1 = subparsers.add_parser(
        "reproduce-fig1",
        parents=[common],
        help="Cat-CS against SV-CS overlap curves for N = 2, 4, 6, 8",
    )
    fig1.add_argument(
        "--alpha-max",
        type=float,
        default=FIG1_ALPHA_MAX,
        help="Largest |alpha| of the curves",
    )
    fig1.add_argument(
        "--alpha-step",
        type=float,
        default=FIG1_ALPHA_STEP,
        help="|alpha| step of the curves",
    )
    fig1.add_argument(
        "--sv-pairing",
        choices=[p.value for p in Pairing],
        help=NoonSim.sv_pairing.help,
    )
    fig1.add_argument("--squeeze", type=float, help=NoonSim.squeeze.help)

    subparsers.add_parser(
        "verify",
        parents=[common],
        help="Run the invariant checks and print a pass/fail table",
    )

    return argparser


argparser = get_argparser()

# argparse destinations copied onto the trait of the same name when given
PASSTHROUGH = (
    "n_max",
    "tail",
    "output",
    "jobs",
    "gamma",
    "families",
    "photon_numbers",
    "alpha_min",
    "alpha_max",
    "alpha_step",
    "sv_pairing",
    "squeeze",
    "grid",
    "refine_iters",
    "phase_grid",
    "amplitude_max",
)


def make_app(argv=None):
    if argv is None:
        argv = sys.argv[1:]

    # version must be checked before parse, as the subcommand is required and
    # argparse will spit out an error if allowed to be parsed first.
    if "--version" in argv:
        print(__version__)
        sys.exit(0)

    args = get_argparser().parse_args(argv)

    app = NoonSim()

    if args.debug:
        app.log_level = logging.DEBUG

    app.load_config_file(args.config)

    try:
        app.command = args.command
        app.json_logs = args.json_logs
        if args.command == "reproduce-fig1":
            app.alpha_min = 0.0
        for name in PASSTHROUGH:
            value = getattr(args, name, None)
            if value is not None:
                setattr(app, name, value)
        app.validate()
    except (DomainError, TraitError, ValueError) as e:
        print("noonsim: error: {}".format(e), file=sys.stderr)
        sys.exit(2)

    return app


def main(argv=None):
    app = make_app(argv)
    app.initialize()
    try:
        code = app.start()
    except DomainError as e:
        app.log.error("%s", e, extra=dict(phase="failed"))
        if app.log_level == logging.DEBUG:
            app.log.exception(e)
        sys.exit(2)
    except (ConventionError, OverlapExponentError, UnitarityError) as e:
        app.log.error("%s", e, extra=dict(phase="failed"))
        if app.log_level == logging.DEBUG:
            app.log.exception(e)
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    main()
