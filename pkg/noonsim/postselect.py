"""
Post-selection on N photons and the NOON-state figures of merit

Two numbers describe how well an input produces NOON(N) behind the splitter:

- the fidelity, |<NOON|psi_N>|^2 for the *normalized* N-photon component of
  the output, and
- the overlap, |<NOON|U psi>|^2 = |<U^dag NOON|psi>|^2, the probability that
  post-selection hands out exactly NOON(N). It equals block probability times
  fidelity.
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .beamsplitter import BALANCED_GAMMA, transform_block
from .fock import (
    BlockVector,
    DomainError,
    extract_block,
    inner_product,
    normalize,
)
from .states import (
    CatParity,
    InputFamily,
    build_input,
    ideal_input,
    required_input,
)
from .utils import log_cosh, log_sinh

log = logging.getLogger("noonsim")

UNITARITY_TOLERANCE = 1e-10


class UnitarityError(RuntimeError):
    """Raised when the input-side and output-side overlaps disagree."""

    pass


class OverlapExponentError(RuntimeError):
    """Raised when no candidate exponent reproduces the numerical overlap."""

    pass


@dataclass(frozen=True)
class PostSelectionResult:
    total_n: int
    fidelity: float
    block_probability: float
    overlap_with_ideal: float


def _check_even(total_n):
    if int(total_n) != total_n or total_n < 2 or total_n % 2:
        raise DomainError(
            "The overlap with the ideal input needs a positive even N, "
            "got {}".format(total_n)
        )
    return int(total_n)


def noon_block(total_n):
    """NOON(N) as an N-photon block: d_0 = d_N = 1/sqrt(2)"""
    amps = np.zeros(total_n + 1, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return BlockVector(total_n, amps, 1.0)


def _block_fidelity(block):
    d = normalize(block).amps
    return float(abs(d[0] + d[-1]) ** 2 / 2)


def noon_fidelity(state, total_n):
    """|d_0 + d_N|^2 / 2 for the normalized N-photon block of `state`

    d_0 is C_{0,N} and d_N is C_{N,0}. Raises EmptyBlockError when the state
    has no N-photon component.
    """
    return _block_fidelity(extract_block(state, total_n))


def output_block(state, total_n, gamma=BALANCED_GAMMA):
    """The N-photon block of U(gamma)|state>, computed on that block only"""
    return transform_block(extract_block(state, total_n), gamma)


def noon_overlap(state, total_n, gamma=BALANCED_GAMMA):
    """|<NOON(N)|U(gamma)|state>|^2 for any N >= 1"""
    return float(
        abs(inner_product(noon_block(total_n), output_block(state, total_n, gamma)))
        ** 2
    )


def postselect(state, total_n, gamma=BALANCED_GAMMA):
    """Fidelity, block probability and overlap of the N-photon outcome"""
    block = output_block(state, total_n, gamma)
    fidelity = _block_fidelity(block)
    overlap = abs(inner_product(noon_block(total_n), block)) ** 2
    return PostSelectionResult(
        total_n=total_n,
        fidelity=fidelity,
        block_probability=block.weight,
        overlap_with_ideal=float(overlap),
    )


def postselection_overlap(state, total_n, gamma=BALANCED_GAMMA):
    """|<ideal input|state>|^2, cross-checked against the output side

    The same number is computed as |<NOON(N)|U(gamma)|state>|^2; the two paths
    must agree within UNITARITY_TOLERANCE.
    """
    total_n = _check_even(total_n)
    if complex(gamma) == BALANCED_GAMMA:
        ideal = ideal_input(total_n)
    else:
        ideal = required_input(total_n, gamma)
    direct = abs(inner_product(ideal, state)) ** 2
    if total_n > state.n_max_a + state.n_max_b:
        via_output = 0.0
    else:
        via_output = noon_overlap(state, total_n, gamma)
    if abs(direct - via_output) > UNITARITY_TOLERANCE:
        raise UnitarityError(
            "Overlap paths disagree for N={}: {:.3e} against {:.3e}".format(
                total_n, direct, via_output
            )
        )
    return float(direct)


class OverlapExponent(enum.Enum):
    """Candidate powers of |alpha| in the closed-form cat overlap"""

    SQUARE = "2"
    TWO_N = "2N"

    def power(self, total_n):
        return 2 if self is OverlapExponent.SQUARE else 2 * total_n


def _analytic_overlap(alpha_mag, total_n, parity, exponent):
    if alpha_mag == 0:
        return 0.0
    x = alpha_mag ** 2
    log_norm = log_cosh(x) if parity is CatParity.EVEN else log_sinh(x)
    log_value = (
        (total_n - 1) * math.log(2)
        + exponent.power(total_n) * math.log(alpha_mag)
        - x
        - gammaln(total_n + 1)
        - log_norm
    )
    return float(math.exp(log_value))


def matching_parity(total_n):
    """The cat parity whose photon content matches the ideal input of N"""
    return CatParity.EVEN if total_n % 4 == 0 else CatParity.ODD


def cat_input(beta_mag, total_n, n_max=None):
    """Cat state of matching parity in mode a, coherent alpha = i beta in b"""
    if matching_parity(total_n) is CatParity.EVEN:
        family = InputFamily.ecs_cs
    else:
        family = InputFamily.ocs_cs
    return build_input(family(beta_mag, 1j * beta_mag), n_max)


# |alpha| values and photon numbers on which the exponent is decided
EXPONENT_PROBE_ALPHAS = (0.5, 1.0, 1.5, 2.0)
EXPONENT_PROBE_N = (2, 4)


@lru_cache(maxsize=1)
def resolve_overlap_exponent():
    """The candidate exponent that reproduces the numerical overlap"""
    deviations = {}
    for exponent in OverlapExponent:
        worst = 0.0
        for total_n in EXPONENT_PROBE_N:
            parity = matching_parity(total_n)
            for alpha_mag in EXPONENT_PROBE_ALPHAS:
                state = cat_input(alpha_mag, total_n)
                numeric = postselection_overlap(state, total_n)
                analytic = _analytic_overlap(alpha_mag, total_n, parity, exponent)
                worst = max(worst, abs(analytic - numeric))
        deviations[exponent] = worst
        log.debug("Overlap exponent |alpha|^%s deviates by %.3e", exponent.value, worst)
    matching = [e for e, dev in deviations.items() if dev < UNITARITY_TOLERANCE]
    if len(matching) != 1:
        raise OverlapExponentError(
            "Expected exactly one overlap exponent to match, deviations: {}".format(
                {e.value: d for e, d in deviations.items()}
            )
        )
    return matching[0]


def analytic_overlap_cat(alpha_mag, total_n, parity, exponent=None):
    """Closed-form overlap of (cat x coherent, alpha = i beta) with the ideal input

    2^{N-1} |alpha|^E exp(-|alpha|^2) / (N! cosh|alpha|^2), sinh for the odd cat,
    with E decided by `resolve_overlap_exponent` unless given.
    """
    total_n = _check_even(total_n)
    if not alpha_mag >= 0:
        raise DomainError("|alpha| must be nonnegative, got {}".format(alpha_mag))
    if exponent is None:
        exponent = resolve_overlap_exponent()
    return _analytic_overlap(float(alpha_mag), total_n, CatParity(parity), exponent)


def sv_cs_fidelity(r, alpha, total_n, gamma=BALANCED_GAMMA):
    """NOON fidelity behind the splitter for squeezed vacuum x coherent"""
    state = build_input(InputFamily.sv_cs(r, alpha), n_max=total_n)
    return _block_fidelity(output_block(state, total_n, gamma))


def cat_cs_fidelity(beta, alpha, total_n, parity, gamma=BALANCED_GAMMA):
    """NOON fidelity behind the splitter for a cat state x coherent"""
    if CatParity(parity) is CatParity.EVEN:
        family = InputFamily.ecs_cs(beta, alpha)
    else:
        family = InputFamily.ocs_cs(beta, alpha)
    state = build_input(family, n_max=total_n)
    return _block_fidelity(output_block(state, total_n, gamma))

