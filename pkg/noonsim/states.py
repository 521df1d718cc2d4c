"""
Constructors for every state the NOON generation scheme needs

Single-mode states (coherent, squeezed vacuum, even/odd cat) come with an
automatic photon-number cutoff chosen so that the discarded probability stays
below a tolerance. The amplitudes follow the textbook number-state expansions
literally, without any rephasing; comparisons that should ignore global phase
must say so.
"""
import cmath
import enum
import logging
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.special import gammainc, gammaln
from scipy.stats import nbinom

from .beamsplitter import BALANCED_GAMMA, disentangle
from .fock import (
    BipartiteState,
    DomainError,
    SingleModeState,
    normalize,
    tensor_product,
)
from .utils import log_binom, log_cosh, log_sinh

log = logging.getLogger("noonsim")

DEFAULT_TAIL = 1e-12
MAX_AUTO_CUTOFF = 1000


class CatParity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


class Family(enum.Enum):
    """Which product state feeds the beam splitter (mode a first, coherent b)"""

    SV_CS = "sv-cs"
    ECS_CS = "ecs-cs"
    OCS_CS = "ocs-cs"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise DomainError(
            "Unknown input family {!r}, expected one of {}".format(
                value, ", ".join(m.value for m in cls)
            )
        )

    @property
    def parity(self):
        return {
            Family.SV_CS: None,
            Family.ECS_CS: CatParity.EVEN,
            Family.OCS_CS: CatParity.ODD,
        }[self]


@dataclass(frozen=True)
class InputFamily:
    """A family tag with its amplitudes.

    `amplitude` is the squeeze r (real) for SV_CS and the cat amplitude beta
    for the cat families; `alpha` is the coherent amplitude of mode b.
    """

    tag: Family
    amplitude: complex
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "tag", Family.parse(self.tag))
        amplitude = complex(self.amplitude)
        if self.tag is Family.SV_CS:
            if amplitude.imag != 0:
                raise DomainError(
                    "The squeeze amplitude r is real, got {}".format(amplitude)
                )
            amplitude = amplitude.real
        object.__setattr__(self, "amplitude", amplitude)
        object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def sv_cs(cls, r, alpha):
        return cls(Family.SV_CS, r, alpha)

    @classmethod
    def ecs_cs(cls, beta, alpha):
        return cls(Family.ECS_CS, beta, alpha)

    @classmethod
    def ocs_cs(cls, beta, alpha):
        return cls(Family.OCS_CS, beta, alpha)


def _poisson_tail(n_max, mean):
    # P(n > n_max) for a Poisson distribution of the given mean
    if mean <= 0:
        return 0.0
    return float(gammainc(n_max + 1, mean))


def _squeezed_success(r):
    # 1 - tanh(r)^2 without the cancellation near tanh r = 1
    return 1.0 / math.cosh(abs(r)) ** 2 if abs(r) < 350 else 0.0


def _squeezed_tail(n_max, r):
    # the pair number k of |2k> is negative binomial with n = 1/2 and
    # p = 1/cosh(r)^2, so the dropped probability is P(k > n_max // 2) exactly
    if r == 0:
        return 0.0
    p = _squeezed_success(r)
    if p == 0:
        return 1.0
    return float(nbinom.sf(n_max // 2, 0.5, p))


def _squeezed_start(r, tail):
    # nbinom.isf lands within a pair or two of the smallest cutoff
    if r == 0:
        return 0
    p = _squeezed_success(r)
    if p == 0:
        return MAX_AUTO_CUTOFF
    k = nbinom.isf(tail, 0.5, p)
    if not math.isfinite(k):
        return MAX_AUTO_CUTOFF
    return 2 * max(int(k) - 2, 0)


def _cat_tail(n_max, beta_mag, parity):
    # the cat keeps half the terms of e^{x} = sum x^n/n!, so its tail is bounded
    # by the Poisson tail rescaled by e^x / cosh x (or sinh x)
    x = beta_mag ** 2
    if x == 0:
        return 0.0
    if parity is CatParity.EVEN:
        scale = 2.0 / (1.0 + math.exp(-2 * x))
    else:
        scale = 2.0 / -math.expm1(-2 * x)
    return min(_poisson_tail(n_max, x) * scale, 1.0)


def _coherent_start(mean):
    return int(math.ceil(mean + 10 * math.sqrt(mean + 1) + 20))


def auto_cutoff(tail_fn, start, tail=DEFAULT_TAIL):
    """Smallest n_max >= start whose discarded probability is below `tail`.

    The search gives up at the larger of MAX_AUTO_CUTOFF and twice `start`,
    with a warning; the returned state then records the larger tail honestly.
    """
    n_max = max(int(start), 0)
    cap = max(MAX_AUTO_CUTOFF, 2 * n_max)
    while tail_fn(n_max) >= tail:
        if n_max >= cap:
            log.warning(
                "Cutoff capped at %d with discarded probability %.3e",
                n_max,
                tail_fn(n_max),
            )
            break
        n_max += 1
    return n_max


def coherent(alpha, n_max=None, tail=DEFAULT_TAIL):
    """|alpha> = exp(-|alpha|^2/2) sum_n alpha^n / sqrt(n!) |n>"""
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    tail_fn = partial(_poisson_tail, mean=mean)
    if n_max is None:
        n_max = auto_cutoff(tail_fn, _coherent_start(mean), tail)
    amps = np.zeros(n_max + 1, dtype=complex)
    if alpha == 0:
        amps[0] = 1.0
    else:
        n = np.arange(n_max + 1)
        log_mag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1) - mean / 2
        amps[:] = np.exp(log_mag + 1j * n * cmath.phase(alpha))
    return SingleModeState(amps, tail_fn(n_max))


def squeezed_vacuum(r, n_max=None, tail=DEFAULT_TAIL):
    """|r> = cosh(r)^{-1/2} sum_k (-tanh r)^k sqrt((2k)!) / (2^k k!) |2k>"""
    r = complex(r)
    if r.imag != 0:
        raise DomainError("The squeeze amplitude r is real, got {}".format(r))
    r = r.real
    tail_fn = partial(_squeezed_tail, r=r)
    if n_max is None:
        n_max = auto_cutoff(tail_fn, _squeezed_start(r, tail), tail)
    amps = np.zeros(n_max + 1, dtype=complex)
    if r == 0:
        amps[0] = 1.0
    else:
        t = math.tanh(r)
        k = np.arange(n_max // 2 + 1)
        log_mag = (
            k * math.log(abs(t))
            + 0.5 * gammaln(2 * k + 1)
            - k * math.log(2)
            - gammaln(k + 1)
            - 0.5 * log_cosh(abs(r))
        )
        sign = np.where((k % 2 == 1) & (t > 0), -1.0, 1.0)
        amps[2 * k] = sign * np.exp(log_mag)
    return SingleModeState(amps, tail_fn(n_max))


def cat(beta, parity, n_max=None, tail=DEFAULT_TAIL):
    """Even or odd coherent state, (|beta> +- |-beta>) normalized.

    even: cosh(|b|^2)^{-1/2} sum_k b^{2k} / sqrt((2k)!) |2k>
    odd:  sinh(|b|^2)^{-1/2} sum_k b^{2k+1} / sqrt((2k+1)!) |2k+1>
    """
    beta = complex(beta)
    parity = CatParity(parity)
    x = abs(beta) ** 2
    if parity is CatParity.ODD and x == 0:
        raise DomainError("The odd cat state is undefined at beta = 0")
    tail_fn = partial(_cat_tail, beta_mag=abs(beta), parity=parity)
    if n_max is None:
        n_max = auto_cutoff(tail_fn, _coherent_start(x), tail)
    amps = np.zeros(n_max + 1, dtype=complex)
    if x == 0:
        amps[0] = 1.0
        return SingleModeState(amps, 0.0)
    start = 0 if parity is CatParity.EVEN else 1
    n = np.arange(start, n_max + 1, 2)
    log_norm = log_cosh(x) if parity is CatParity.EVEN else log_sinh(x)
    log_mag = n * math.log(abs(beta)) - 0.5 * gammaln(n + 1) - 0.5 * log_norm
    amps[n] = np.exp(log_mag + 1j * n * cmath.phase(beta))
    return SingleModeState(amps, tail_fn(n_max))


def coherent_superposition(beta, parity, n_max):
    """(|beta> + |-beta>) or (|beta> - |-beta>), normalized numerically"""
    sign = 1.0 if CatParity(parity) is CatParity.EVEN else -1.0
    plus = coherent(beta, n_max)
    minus = coherent(-complex(beta), n_max)
    return normalize(
        SingleModeState(plus.amps + sign * minus.amps, max(plus.tail_bound, 0.0))
    )


def _check_photon_number(total_n):
    if int(total_n) != total_n or total_n < 1:
        raise DomainError(
            "The photon number N must be a positive integer, got {}".format(total_n)
        )
    return int(total_n)


def noon(total_n):
    """(|N, 0> + |0, N>) / sqrt(2)"""
    total_n = _check_photon_number(total_n)
    amps = np.zeros((total_n + 1, total_n + 1), dtype=complex)
    amps[total_n, 0] = amps[0, total_n] = 1 / math.sqrt(2)
    return BipartiteState(amps)


def ideal_input(total_n):
    """The input a 50-50 splitter turns into NOON(N), for even N.

    N = 0 mod 4: sum_k (-1)^k sqrt(C(N, 2k)) |N-2k, 2k> / sqrt(2^{N-1})
    N = 2 mod 4: sum_k (-1)^k sqrt(C(N, 2k+1)) |N-2k-1, 2k+1> / sqrt(2^{N-1})
    """
    total_n = _check_photon_number(total_n)
    if total_n % 2:
        raise DomainError(
            "The 50-50 ideal input only exists in closed form for even N, got "
            "N={}; for odd N the fidelity stays below one".format(total_n)
        )
    amps = np.zeros((total_n + 1, total_n + 1), dtype=complex)
    offset = 0 if total_n % 4 == 0 else 1
    k = np.arange((total_n - offset) // 2 + 1)
    m = 2 * k + offset
    sign = np.where(k % 2 == 1, -1.0, 1.0)
    amps[total_n - m, m] = sign * np.exp(
        0.5 * (log_binom(total_n, m) - (total_n - 1) * math.log(2))
    )
    return BipartiteState(amps)


def required_input(total_n, gamma=BALANCED_GAMMA):
    """U^dag(gamma)|NOON(N)> for any N >= 1 and mixing parameter gamma.

    Uses the disentangled expansion
    exp(-qN/2)/sqrt(2) sum_k sqrt(C(N, k)) (r^k + p^{N-k}) |N-k, k>.
    """
    total_n = _check_photon_number(total_n)
    p, q, r = disentangle(gamma)
    k = np.arange(total_n + 1)
    powers_r = np.ones(total_n + 1, dtype=complex)
    powers_p = np.ones(total_n + 1, dtype=complex)
    powers_r[1:] = np.cumprod(np.full(total_n, r))
    powers_p[1:] = np.cumprod(np.full(total_n, p))
    coeff = np.exp(0.5 * log_binom(total_n, k) - q * total_n / 2) / math.sqrt(2)
    amps = np.zeros((total_n + 1, total_n + 1), dtype=complex)
    amps[total_n - k, k] = coeff * (powers_r[k] + powers_p[total_n - k])
    return BipartiteState(amps)


def single_mode_input(family, n_max=None, tail=DEFAULT_TAIL):
    """The mode-a and mode-b states of a family, in that order"""
    if family.tag is Family.SV_CS:
        mode_a = squeezed_vacuum(family.amplitude, n_max, tail)
    else:
        mode_a = cat(family.amplitude, family.tag.parity, n_max, tail)
    return mode_a, coherent(family.alpha, n_max, tail)


def build_input(family, n_max=None, tail=DEFAULT_TAIL):
    """The product state (SV or cat in mode a) x (coherent in mode b)"""
    return tensor_product(*single_mode_input(family, n_max, tail))
