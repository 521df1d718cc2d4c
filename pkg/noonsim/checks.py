"""
Invariant checks run by `noonsim verify`

Every check is a class with a `measure()` method returning the worst deviation
it found and a short detail string. `run()` turns that into a CheckResult and
never raises: an exception inside a check is a failed check.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .beamsplitter import (
    BALANCED_GAMMA,
    PROBE_GAMMA,
    apply_direct,
    apply_disentangled,
    convention_deviation,
    resolve_convention,
    verify_unitary,
)
from .fock import (
    fock_state,
    norm,
    phase_distance,
    photon_number_distribution,
    random_state,
)
from .postselect import (
    analytic_overlap_cat,
    cat_input,
    matching_parity,
    noon_fidelity,
    postselection_overlap,
    resolve_overlap_exponent,
)
from .states import (
    DEFAULT_TAIL,
    InputFamily,
    build_input,
    ideal_input,
    noon,
    required_input,
)

CHECK_GAMMAS = (BALANCED_GAMMA, math.pi / 4, PROBE_GAMMA)
CHECK_N_MAX = 20
RANDOM_STATES = 200
SEED = 1234


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""


class Check:
    """Base class; subclasses set `name`, `tolerance` and implement measure()"""

    name = None
    tolerance = 1e-10

    def __init__(self, tail=DEFAULT_TAIL):
        self.log = logging.getLogger("noonsim")
        self.tail = tail

    def measure(self):
        """Return (worst deviation, detail string)"""
        raise NotImplementedError()

    def run(self):
        try:
            deviation, detail = self.measure()
        except Exception as e:
            self.log.error(
                "Check %s raised %s", self.name, e, extra=dict(phase="failed")
            )
            return CheckResult(
                self.name,
                False,
                math.inf,
                self.tolerance,
                "{}: {}".format(type(e).__name__, e),
            )
        deviation = float(deviation)
        passed = math.isfinite(deviation) and deviation <= self.tolerance
        self.log.debug(
            "Check %s: deviation %.3e (%s)",
            self.name,
            deviation,
            "pass" if passed else "FAIL",
            extra=dict(phase="verifying"),
        )
        return CheckResult(self.name, passed, deviation, self.tolerance, detail)


def _random_states(count=RANDOM_STATES, n_max=CHECK_N_MAX, seed=SEED):
    rng = np.random.default_rng(seed)
    return [random_state(rng, n_max) for _ in range(count)]


class Unitarity(Check):
    name = "unitarity"

    def measure(self):
        worst = 0.0
        for gamma in CHECK_GAMMAS:
            report = verify_unitary(gamma, CHECK_N_MAX)
            worst = max(worst, report.unitarity, report.norm, report.conservation)
        return worst, "U U^dag = 1, norm and block weights, N <= {}".format(
            CHECK_N_MAX
        )


class OracleEquivalence(Check):
    name = "oracle-equivalence"

    def measure(self):
        worst = 0.0
        states = _random_states()
        for gamma in CHECK_GAMMAS:
            for state in states:
                direct = apply_direct(state, gamma)
                product = apply_disentangled(state, gamma)
                worst = max(worst, float(np.max(np.abs(direct.amps - product.amps))))
        return worst, "{} random states x {} gammas, n_max={}".format(
            len(states), len(CHECK_GAMMAS), CHECK_N_MAX
        )


class Parseval(Check):
    name = "parseval"

    def measure(self):
        worst = 0.0
        for state in _random_states(count=20):
            for gamma in CHECK_GAMMAS:
                out = apply_direct(state, gamma)
                weights = photon_number_distribution(out)
                worst = max(
                    worst,
                    abs(float(np.sum(weights)) - norm(out) ** 2),
                    float(
                        np.max(np.abs(weights - photon_number_distribution(state)))
                    ),
                )
        return worst, "sum of block weights against the norm, block conservation"


class RoundTrip(Check):
    name = "round-trip"

    def measure(self):
        worst = 0.0
        for state in _random_states(count=20):
            for gamma in CHECK_GAMMAS:
                out = apply_direct(state, gamma)
                back = apply_disentangled(out, gamma, dagger=True)
                worst = max(worst, float(np.max(np.abs(back.amps - state.amps))))
        return worst, "U^dag(gamma) U(gamma) on random states"


class HongOuMandel(Check):
    name = "hong-ou-mandel"
    tolerance = 1e-12

    def measure(self):
        out = apply_direct(fock_state(1, 1, 2, 2), BALANCED_GAMMA)
        coincidence = abs(out.amps[1, 1])
        return max(coincidence, abs(1 - noon_fidelity(out, 2))), "|1,1> -> NOON(2)"


class NoonProduction(Check):
    name = "noon-production"
    tolerance = 1e-9

    def measure(self):
        worst = 0.0
        for total_n in (2, 4, 6, 8):
            out = apply_direct(ideal_input(total_n), BALANCED_GAMMA)
            worst = max(
                worst,
                phase_distance(out, noon(total_n)),
                abs(1 - noon_fidelity(out, total_n)),
            )
            for gamma in (PROBE_GAMMA, math.pi / 4):
                out = apply_direct(required_input(total_n, gamma), gamma)
                worst = max(worst, phase_distance(out, noon(total_n)))
        return worst, "ideal and required inputs, N = 2, 4, 6, 8"


class CatPerfection(Check):
    name = "cat-perfection"
    tolerance = 1e-9

    def measure(self):
        worst = 0.0
        for family, total_n in (
            (InputFamily.ecs_cs, 4),
            (InputFamily.ecs_cs, 8),
            (InputFamily.ocs_cs, 2),
            (InputFamily.ocs_cs, 6),
        ):
            for beta in (0.5, 1.0, 2.0):
                state = build_input(family(beta, 1j * beta), tail=self.tail)
                out = apply_direct(state, BALANCED_GAMMA)
                worst = max(worst, abs(1 - noon_fidelity(out, total_n)))
        return worst, "alpha = i beta, |beta| = 0.5, 1, 2"


class OverlapExponentCheck(Check):
    name = "overlap-exponent"

    def measure(self):
        exponent = resolve_overlap_exponent()
        worst = 0.0
        for total_n in (2, 4, 6, 8):
            parity = matching_parity(total_n)
            for alpha_mag in 0.25 * np.arange(1, 13):
                numeric = postselection_overlap(cat_input(alpha_mag, total_n), total_n)
                analytic = analytic_overlap_cat(alpha_mag, total_n, parity, exponent)
                worst = max(worst, abs(analytic - numeric))
        return worst, "resolved exponent |alpha|^{}".format(exponent.value)


class ConventionCheck(Check):
    name = "disentangling-convention"

    def measure(self):
        convention = resolve_convention()
        deviation = max(convention_deviation(convention, g) for g in CHECK_GAMMAS)
        return deviation, convention.describe()


DEFAULT_CHECKS = [
    Unitarity,
    OracleEquivalence,
    Parseval,
    RoundTrip,
    HongOuMandel,
    NoonProduction,
    CatPerfection,
    OverlapExponentCheck,
    ConventionCheck,
]


def run_checks(checks=None, tail=DEFAULT_TAIL):
    """Instantiate and run every check class, in order"""
    return [check(tail).run() for check in (checks or DEFAULT_CHECKS)]


def format_table(results):
    """A fixed-width pass/fail table, one line per check"""
    width = max([len(r.name) for r in results] + [5])
    lines = [
        "{:<{w}}  {:<6}  {:>10}  {:>9}  {}".format(
            "check", "result", "deviation", "tolerance", "detail", w=width
        )
    ]
    for r in results:
        lines.append(
            "{:<{w}}  {:<6}  {:>10.3e}  {:>9.0e}  {}".format(
                r.name,
                "PASS" if r.passed else "FAIL",
                r.deviation,
                r.tolerance,
                r.detail,
                w=width,
            )
        )
    return "\n".join(lines)
