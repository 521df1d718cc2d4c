"""noonsim: NOON states from a beam splitter and post-selection

Simulates a lossless two-mode beam splitter fed with a squeezed vacuum or a
cat state in one arm and a coherent state in the other, post-selects on N
photons and reports how close the result is to the NOON state.

Usage:

    python -m noonsim sweep --family ocs-cs --N 2 --out sweep.csv
"""
import logging
import sys

from pythonjsonlogger import jsonlogger
from traitlets import Bool, Enum, Float, Int, List, Unicode, default
from traitlets.config import Application

from . import __version__
from .beamsplitter import BALANCED_GAMMA, block_unitary, resolve_convention
from .checks import DEFAULT_CHECKS, format_table, run_checks
from .fock import DomainError
from .postselect import resolve_overlap_exponent
from .search import Pairing, SearchConfig, optimize, write_trace
from .states import DEFAULT_TAIL, Family
from .sweeps import (
    FIG1_PHOTON_NUMBERS,
    check_alpha_grid,
    check_photon_numbers,
    fig1_panels,
    sweep,
    write_csv,
    write_fig1,
)
from .utils import (
    ComplexSpecification,
    check_output_path,
    format_number,
    validate_grid,
)

COMMANDS = ("sweep", "optimize", "reproduce-fig1", "verify")


class NoonSim(Application):
    """An application for NOON-state generation sweeps, searches and checks"""

    name = "noonsim"
    version = __version__
    description = __doc__

    @default("log_level")
    def _default_log_level(self):
        """The application's default log level"""
        return logging.INFO

    command = Enum(
        COMMANDS,
        "verify",
        config=True,
        help="""
        What to run: a sweep over |alpha|, a parameter search, the overlap
        figure data or the invariant checks.
        """,
    )

    n_max = Int(
        None,
        allow_none=True,
        config=True,
        help="""
        Photon-number cutoff per mode for the inputs of sweeps and searches.

        Defaults to N, which already holds the N-photon block exactly.
        """,
    )

    tail = Float(
        DEFAULT_TAIL,
        config=True,
        help="""
        Largest discarded probability when a cutoff is chosen automatically.
        """,
    )

    jobs = Int(
        1,
        config=True,
        help="""
        Worker processes for grid evaluations. 1 evaluates in this process.
        """,
    )

    output = Unicode(
        "",
        config=True,
        help="""
        Output file (sweep, optimize trace) or directory (reproduce-fig1).
        """,
    )

    gamma = ComplexSpecification(
        BALANCED_GAMMA,
        config=True,
        help="""
        Beam-splitter mixing parameter gamma, |gamma| < pi/2.

        Defaults to i pi/4, the symmetric 50-50 splitter. Strings such as
        '0.785398j' or 'polar:0.3,0.7' are accepted.
        """,
    )

    families = List(
        ["ocs-cs", "sv-cs"],
        config=True,
        help="""
        Input families to sweep or optimize: sv-cs, ecs-cs, ocs-cs.
        """,
    )

    photon_numbers = List(
        [2, 6],
        config=True,
        help="""
        Post-selected photon numbers N.
        """,
    )

    alpha_min = Float(0.0, config=True, help="Smallest |alpha| of a sweep.")
    alpha_max = Float(4.0, config=True, help="Largest |alpha| of a sweep.")
    alpha_step = Float(0.05, config=True, help="|alpha| step of a sweep.")

    grid = Int(
        50, config=True, help="Coarse-grid points per amplitude axis of a search."
    )
    phase_grid = Int(
        8, config=True, help="Coarse-grid points for the phase of alpha in a search."
    )
    refine_iters = Int(
        200, config=True, help="Nelder-Mead iterations after the coarse grid."
    )

    amplitude_max = Float(
        3.0,
        config=True,
        help="""
        Upper bound of |alpha| and of the cat amplitude |beta| in a search.
        """,
    )

    sv_pairing = Enum(
        [p.value for p in Pairing],
        Pairing.FIDELITY.value,
        config=True,
        help="""
        How SV-CS sweeps pick r for each |alpha|.

        'fidelity' maximizes the NOON fidelity, 'overlap' maximizes the
        overlap, 'fixed' uses `squeeze`.
        """,
    )

    squeeze = Float(
        None,
        allow_none=True,
        config=True,
        help="""
        Fixed squeeze r for SV-CS sweeps with sv_pairing='fixed'.
        """,
    )

    json_logs = Bool(
        False,
        help="""
        Log output in structured JSON format.

        Useful when stdout is consumed by other tools
        """,
        config=True,
    )

    checks = List(
        DEFAULT_CHECKS,
        config=True,
        help="""
        Ordered list of invariant checks that `verify` runs.
        """,
    )

    @default("output")
    def _output_default(self):
        return {
            "sweep": "sweep.csv",
            "optimize": "",
            "reproduce-fig1": "fig1",
            "verify": "",
        }[self.command]

    def alpha_grid(self):
        return validate_grid(self.alpha_min, self.alpha_max, self.alpha_step)

    def search_config(self):
        return SearchConfig(
            grid=self.grid,
            phase_grid=self.phase_grid,
            refine_iters=self.refine_iters,
            amplitude_max=self.amplitude_max,
            gamma=self.gamma,
            jobs=self.jobs,
            n_max=self.n_max,
        )

    def validate(self):
        """Check every setting of the selected command before any file is written

        Raises DomainError or ValueError.
        """
        block_unitary(1, self.gamma)
        if self.jobs < 1:
            raise DomainError("jobs must be at least 1, got {}".format(self.jobs))
        if not self.tail > 0:
            raise DomainError("tail must be positive, got {}".format(self.tail))
        if self.n_max is not None and self.n_max < 1:
            raise DomainError("n_max must be positive, got {}".format(self.n_max))
        families = [Family.parse(f) for f in self.families]
        if self.command == "sweep":
            photon_numbers = check_photon_numbers(self.photon_numbers)
            check_alpha_grid(self.alpha_grid())
            pairing = Pairing(self.sv_pairing)
            if Family.SV_CS in families and pairing is Pairing.FIXED:
                if self.squeeze is None or self.squeeze < 0:
                    raise DomainError("--sv-pairing fixed needs --squeeze r >= 0")
            self._check_cutoff(photon_numbers)
            check_output_path(self.output)
        elif self.command == "optimize":
            for total_n in self.photon_numbers:
                if int(total_n) != total_n or total_n < 1:
                    raise DomainError(
                        "N must be a positive integer, got {}".format(total_n)
                    )
            self.search_config()
            self._check_cutoff(self.photon_numbers)
            if self.output:
                check_output_path(self.output)
        elif self.command == "reproduce-fig1":
            check_alpha_grid(self.alpha_grid())
            if Pairing(self.sv_pairing) is Pairing.FIXED:
                if self.squeeze is None or self.squeeze < 0:
                    raise DomainError("--sv-pairing fixed needs --squeeze r >= 0")
            self._check_cutoff(FIG1_PHOTON_NUMBERS)
            check_output_path(self.output, directory=True)

    def _check_cutoff(self, photon_numbers):
        if self.n_max is not None and self.n_max < max(photon_numbers):
            raise DomainError(
                "--n-max {} cannot hold the N={} photon block".format(
                    self.n_max, max(photon_numbers)
                )
            )

    def run_sweep(self):
        records = sweep(
            self.families,
            self.photon_numbers,
            self.alpha_grid(),
            gamma=self.gamma,
            pairing=self.sv_pairing,
            squeeze=self.squeeze,
            jobs=self.jobs,
            n_max=self.n_max,
        )
        write_csv(records, self.output)
        return 0

    def run_optimize(self):
        config = self.search_config()
        reports = []
        for family in self.families:
            for total_n in self.photon_numbers:
                report = optimize(family, total_n, config)
                reports.append(report)
                params = report.best_params
                print(
                    "{} N={} best_fidelity={} best_overlap={} amplitude={} "
                    "alpha_mag={} phase={} evaluations={}+{}".format(
                        report.family.value,
                        report.total_n,
                        format_number(report.best_fidelity),
                        format_number(report.best_overlap),
                        format_number(params.amplitude),
                        format_number(params.alpha_mag),
                        format_number(params.phase),
                        report.grid_evaluations,
                        report.refine_evaluations,
                    )
                )
        if self.output:
            write_trace(reports, self.output)
        return 0

    def run_reproduce_fig1(self):
        panels, records = fig1_panels(
            self.alpha_grid(),
            photon_numbers=FIG1_PHOTON_NUMBERS,
            gamma=self.gamma,
            pairing=self.sv_pairing,
            squeeze=self.squeeze,
            jobs=self.jobs,
            n_max=self.n_max,
        )
        written = write_fig1(panels, records, self.output)
        for panel in written.panels:
            print(
                "N={} {} peak at |alpha|={} overlap={}; sv-cs max overlap={}".format(
                    panel.total_n,
                    panel.cat_family.value,
                    format_number(panel.cat_peak),
                    format_number(max(panel.cat_overlap)),
                    format_number(max(panel.sv_overlap)),
                )
            )
        return 0

    def run_verify(self):
        self.log.info(
            "Running %d checks", len(self.checks), extra=dict(phase="verifying")
        )
        results = run_checks(self.checks, tail=self.tail)
        print(format_table(results))
        try:
            exponent = resolve_overlap_exponent()
            print("overlap exponent: |alpha|^{}".format(exponent.value))
        except RuntimeError as e:
            print("overlap exponent: unresolved ({})".format(e))
        try:
            convention = resolve_convention()
            print("disentangling convention: {}".format(convention.describe()))
        except RuntimeError as e:
            print("disentangling convention: unresolved ({})".format(e))
        failed = [r.name for r in results if not r.passed]
        if failed:
            self.log.error(
                "%d checks failed: %s",
                len(failed),
                ", ".join(failed),
                extra=dict(phase="failed"),
            )
            return 1
        return 0

    def json_excepthook(self, etype, evalue, traceback):
        """Called on an uncaught exception when using json logging

        Avoids non-JSON output on errors when using --json-logs
        """
        self.log.error(
            "Error during %s: %s",
            self.command,
            evalue,
            exc_info=(etype, evalue, traceback),
            extra=dict(phase="failed"),
        )

    def initialize(self, argv=None):
        """Set up logging; flags have been applied by make_app already"""
        log_handler = logging.StreamHandler()
        if self.json_logs:
            # register JSON excepthook to avoid non-JSON output on errors
            sys.excepthook = self.json_excepthook
            log_handler.setFormatter(jsonlogger.JsonFormatter())
        else:
            log_handler.setFormatter(logging.Formatter(fmt="%(message)s"))
        # library modules log to the same logger; reset handlers so that
        # repeated initialization does not repeat messages
        self.log = logging.getLogger("noonsim")
        self.log.handlers = [log_handler]
        self.log.setLevel(self.log_level)

    def start(self):
        """Run the selected command and return its exit code"""
        return {
            "sweep": self.run_sweep,
            "optimize": self.run_optimize,
            "reproduce-fig1": self.run_reproduce_fig1,
            "verify": self.run_verify,
        }[self.command]()
