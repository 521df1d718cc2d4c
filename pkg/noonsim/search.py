"""
Parameter search over the input amplitudes

`optimize` maximizes the post-selected NOON fidelity of one input family for
one photon number: a coarse grid over (r or |beta|) x |alpha| x relative phase,
then a bounded Nelder-Mead refinement started at the best grid point. Every
evaluation lands in the trace, and the reported optimum is the best sample of
the trace, so it can never fall below a grid point.

`best_squeeze` is the one-dimensional search that pairs a squeeze r with a
coherent amplitude for SV-CS sweeps.
"""
import csv
import enum
import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .beamsplitter import BALANCED_GAMMA, block_unitary
from .fock import DomainError
from .postselect import postselect
from .states import Family, InputFamily, build_input
from .utils import check_output_path, format_number, parallel_map

log = logging.getLogger("noonsim")

SQUEEZE_MAX = 3.0
# candidate squeezes scanned before the bounded 1-D search
PAIRING_SCAN = np.concatenate([[0.0], np.geomspace(1e-4, SQUEEZE_MAX, 60)])


class Pairing(enum.Enum):
    """How an SV-CS sweep picks r for each |alpha|"""

    FIDELITY = "fidelity"
    OVERLAP = "overlap"
    FIXED = "fixed"


@dataclass(frozen=True)
class Params:
    """r (SV-CS) or |beta| (cat families), |alpha| and arg(alpha)"""

    amplitude: float
    alpha_mag: float
    phase: float

    @property
    def alpha(self):
        return self.alpha_mag * complex(math.cos(self.phase), math.sin(self.phase))

    def family(self, tag):
        return InputFamily(tag, self.amplitude, self.alpha)


@dataclass(frozen=True)
class TraceSample:
    stage: str
    params: Params
    fidelity: float
    overlap: float


@dataclass(frozen=True)
class SearchConfig:
    grid: int = 50
    phase_grid: int = 8
    refine_iters: int = 200
    amplitude_max: float = 3.0
    squeeze_max: float = SQUEEZE_MAX
    gamma: complex = BALANCED_GAMMA
    jobs: int = 1
    n_max: int = None

    def __post_init__(self):
        if self.grid < 2:
            raise DomainError("The coarse grid needs at least 2 points per axis")
        if self.phase_grid < 1:
            raise DomainError("The phase grid needs at least 1 point")
        if self.refine_iters < 0:
            raise DomainError("refine_iters must be nonnegative")
        if not (self.amplitude_max > 0 and self.squeeze_max > 0):
            raise DomainError("Amplitude bounds must be positive")


@dataclass(frozen=True)
class OptimizationReport:
    total_n: int
    family: Family
    best_params: Params
    best_fidelity: float
    best_overlap: float
    grid_shape: tuple
    trace: tuple = field(repr=False)

    @property
    def grid_evaluations(self):
        return sum(1 for s in self.trace if s.stage == "grid")

    @property
    def refine_evaluations(self):
        return sum(1 for s in self.trace if s.stage == "refine")


def evaluate(tag, total_n, gamma, params, n_max=None):
    """(fidelity, overlap) at one parameter point; zero when the block is empty

    Inputs are built on an N x N grid unless `n_max` says otherwise; N is
    enough to hold the N-photon block exactly.
    """
    try:
        state = build_input(params.family(tag), n_max=n_max or total_n)
        result = postselect(state, total_n, gamma)
    except DomainError:
        # empty block, or the odd cat at beta = 0
        return 0.0, 0.0
    return result.fidelity, result.overlap_with_ideal


def _evaluate_point(point, tag, total_n, gamma, n_max):
    return evaluate(tag, total_n, gamma, Params(*point), n_max)


def coarse_axes(tag, config):
    """The amplitude, |alpha| and phase axes of the coarse grid

    Cat amplitudes and |alpha| share one axis so that the locus alpha = i beta
    lies on the grid.
    """
    magnitudes = np.linspace(
        config.amplitude_max / config.grid, config.amplitude_max, config.grid
    )
    if tag is Family.SV_CS:
        amplitudes = np.linspace(0.0, config.squeeze_max, config.grid)
    else:
        amplitudes = magnitudes
    phases = 2 * math.pi * np.arange(config.phase_grid) / config.phase_grid
    return amplitudes, magnitudes, phases


def _initial_simplex(x0, steps, upper):
    simplex = [np.array(x0, dtype=float)]
    for i, step in enumerate(steps):
        vertex = np.array(x0, dtype=float)
        # step inwards when the start sits on the upper bound
        if upper[i] is not None and vertex[i] + step > upper[i]:
            step = -step
        vertex[i] += step
        simplex.append(vertex)
    return np.array(simplex)


def optimize(family, total_n, config=None):
    """Maximize the NOON fidelity of `family` for N photons"""
    config = config or SearchConfig()
    tag = Family.parse(family)
    if int(total_n) != total_n or total_n < 1:
        raise DomainError("N must be a positive integer, got {}".format(total_n))
    total_n = int(total_n)
    gamma = complex(config.gamma)
    # validates gamma before any work is spread out
    block_unitary(total_n, gamma)
    if config.n_max is not None and config.n_max < total_n:
        raise DomainError(
            "n_max={} cannot hold the N={} photon block".format(config.n_max, total_n)
        )

    amplitudes, magnitudes, phases = coarse_axes(tag, config)
    points = [
        (float(a), float(m), float(p))
        for a in amplitudes
        for m in magnitudes
        for p in phases
    ]
    log.info(
        "Searching %d grid points for %s, N=%d",
        len(points),
        tag.value,
        total_n,
        extra=dict(phase="optimizing"),
    )
    values = parallel_map(
        partial(
            _evaluate_point, tag=tag, total_n=total_n, gamma=gamma, n_max=config.n_max
        ),
        points,
        config.jobs,
    )
    trace = [
        TraceSample("grid", Params(*point), fidelity, overlap)
        for point, (fidelity, overlap) in zip(points, values)
    ]
    start = max(trace, key=lambda s: s.fidelity)

    if config.refine_iters > 0:

        def objective(x):
            params = Params(float(x[0]), float(x[1]), float(x[2]))
            fidelity, overlap = evaluate(tag, total_n, gamma, params, config.n_max)
            trace.append(TraceSample("refine", params, fidelity, overlap))
            return -fidelity

        amp_step = amplitudes[1] - amplitudes[0]
        mag_step = magnitudes[1] - magnitudes[0]
        phase_step = 2 * math.pi / config.phase_grid
        upper = [float(amplitudes[-1]), float(magnitudes[-1]), None]
        x0 = [start.params.amplitude, start.params.alpha_mag, start.params.phase]
        minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=[(0.0, upper[0]), (0.0, upper[1]), (None, None)],
            options=dict(
                maxiter=config.refine_iters,
                xatol=1e-10,
                fatol=1e-14,
                initial_simplex=_initial_simplex(
                    x0, [amp_step / 2, mag_step / 2, phase_step / 4], upper
                ),
            ),
        )

    best = max(trace, key=lambda s: s.fidelity)
    phase = best.params.phase % (2 * math.pi)
    best_params = Params(best.params.amplitude, best.params.alpha_mag, phase)
    log.info(
        "Best fidelity for %s, N=%d: %.9f at %s",
        tag.value,
        total_n,
        best.fidelity,
        best_params,
        extra=dict(phase="optimizing"),
    )
    return OptimizationReport(
        total_n=total_n,
        family=tag,
        best_params=best_params,
        best_fidelity=best.fidelity,
        best_overlap=best.overlap,
        grid_shape=(len(amplitudes), len(magnitudes), len(phases)),
        trace=tuple(trace),
    )


def best_squeeze(
    alpha_mag, total_n, gamma=BALANCED_GAMMA, pairing=Pairing.FIDELITY, n_max=None
):
    """The squeeze r in [0, SQUEEZE_MAX] that maximizes fidelity or overlap

    The coherent amplitude is taken real. A logarithmic scan brackets the best
    r, then a bounded Brent search refines it inside the bracket. Returns
    (r, value of the maximized quantity).
    """
    pairing = Pairing(pairing)
    if pairing is Pairing.FIXED:
        raise DomainError("A fixed pairing has no squeeze to search for")
    column = 0 if pairing is Pairing.FIDELITY else 1

    def value(r):
        params = Params(float(r), alpha_mag, 0.0)
        return evaluate(Family.SV_CS, total_n, gamma, params, n_max)[column]

    scanned = [value(r) for r in PAIRING_SCAN]
    i = int(np.argmax(scanned))
    lo = PAIRING_SCAN[max(i - 1, 0)]
    hi = PAIRING_SCAN[min(i + 1, len(PAIRING_SCAN) - 1)]
    result = minimize_scalar(
        lambda r: -value(r),
        bounds=(lo, hi),
        method="bounded",
        options=dict(xatol=1e-10),
    )
    if -result.fun > scanned[i]:
        return float(result.x), float(-result.fun)
    return float(PAIRING_SCAN[i]), float(scanned[i])


TRACE_HEADER = ("stage", "amplitude", "alpha_mag", "phase", "fidelity", "overlap")


def write_trace(reports, path):
    """Every sample of every report, grid samples first, as CSV"""
    path = check_output_path(path)
    log.info("Writing %s", path, extra=dict(phase="writing"))
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("family", "N") + TRACE_HEADER)
        for report in reports:
            for s in report.trace:
                writer.writerow(
                    [report.family.value, str(report.total_n), s.stage]
                    + [
                        format_number(v)
                        for v in (
                            s.params.amplitude,
                            s.params.alpha_mag,
                            s.params.phase,
                            s.fidelity,
                            s.overlap,
                        )
                    ]
                )
    return path
