"""
The lossless two-mode beam splitter U(gamma) = exp(gamma a b^dag - gamma^* a^dag b)

The generator conserves the total photon number, so U is block diagonal with one
(N+1)x(N+1) block per total photon number N, in the basis |n, N-n>, n ascending.
Two independent implementations are kept side by side:

- `apply_direct` exponentiates every block with scipy's `expm`. This is the
  oracle.
- `apply_disentangled` uses the product form of U^dag(gamma),

      exp(p a^dag b) exp[s q (n_a - n_b)] exp(r a b^dag),

  where both ladder exponentials are finite polynomials inside a block
  (a^dag b and a b^dag are nilpotent there).

The sign, conjugation and middle-factor scale of (p, q, r) are not transcribed
from a formula: `resolve_convention` picks the candidate that agrees with the
oracle, once per process.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache, partial

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .fock import (
    BipartiteState,
    BlockVector,
    DomainError,
    extract_block,
    insert_block,
    photon_number_distribution,
)

log = logging.getLogger("noonsim")

# 50-50 lossless symmetric beam splitter
BALANCED_GAMMA = 1j * math.pi / 4

# a generic mixing parameter, so that no two candidate conventions coincide
PROBE_GAMMA = 0.3 * cmath.exp(0.7j)
PROBE_BLOCKS = (1, 2, 3)
ORACLE_TOLERANCE = 1e-10


class ConventionError(RuntimeError):
    """Raised when no disentangling convention reproduces the oracle."""

    pass


@dataclass(frozen=True)
class Convention:
    """How (p, q, r) are read off gamma = |gamma| exp(-i theta).

    p = sigma * e * tan|gamma| with e = conj(phase) if `conjugate_p` else phase,
    r = -sigma * phase * tan|gamma|, q = 2 log sec|gamma|, and the middle factor
    is exp[middle_scale * q * (n_a - n_b)].
    """

    sigma: int = 1
    conjugate_p: bool = True
    middle_scale: float = 0.5

    def describe(self):
        return "sigma={:+d}, p from {}, middle exp[{}q(n_a-n_b)]".format(
            self.sigma,
            "conj(gamma)" if self.conjugate_p else "gamma",
            "" if self.middle_scale == 1 else "{:g}*".format(self.middle_scale),
        )


CANDIDATE_CONVENTIONS = tuple(
    Convention(sigma, conjugate_p, middle_scale)
    for sigma in (1, -1)
    for conjugate_p in (False, True)
    for middle_scale in (1.0, 0.5)
)


def _check_gamma(gamma):
    gamma = complex(gamma)
    if not abs(gamma) < math.pi / 2:
        raise DomainError(
            "|gamma| must be below pi/2 for sec|gamma| to be finite, got {}".format(
                abs(gamma)
            )
        )
    return gamma


def _parameters(gamma, convention, precision=np.float64):
    # p and r come back as complex scalars of the matching precision
    gamma = _check_gamma(gamma)
    ctype = np.result_type(precision, np.complex64)
    p = np.zeros(1, dtype=ctype)
    r = np.zeros(1, dtype=ctype)
    if gamma == 0:
        return p[0], precision(0), r[0]
    re = precision(gamma.real)
    im = precision(gamma.imag)
    mag = np.hypot(re, im)
    tan = np.tan(mag)
    q = -2 * np.log(np.cos(mag))
    p.real = convention.sigma * tan * re / mag
    p.imag = convention.sigma * tan * (-im if convention.conjugate_p else im) / mag
    r.real = -convention.sigma * tan * re / mag
    r.imag = -convention.sigma * tan * im / mag
    return p[0], q, r[0]


def disentangle(gamma, convention=None):
    """Parameters (p, q, r) of the product form of U^dag(gamma)"""
    if convention is None:
        convention = resolve_convention()
    p, q, r = _parameters(gamma, convention)
    return complex(p), float(q), complex(r)


def _ladder_exponential(total_n, coeff, raising):
    # exp(coeff K) on block N, K = a^dag b when raising else a b^dag; K is
    # nilpotent inside a block so the series terminates
    n = np.arange(total_n)
    coupling = np.sqrt(
        (n.astype(np.longdouble) + 1) * (total_n - n).astype(np.longdouble)
    )
    ladder = np.zeros((total_n + 1, total_n + 1), dtype=np.longdouble)
    if raising:
        ladder[n + 1, n] = coupling
    else:
        ladder[n, n + 1] = coupling
    step = coeff * ladder
    term = np.eye(total_n + 1, dtype=step.dtype)
    result = term.copy()
    for k in range(1, total_n + 1):
        term = (term @ step) / k
        result = result + term
    return result


@lru_cache(maxsize=512)
def _block_unitary(total_n, gamma):
    n = np.arange(total_n)
    coupling = np.sqrt((n + 1.0) * (total_n - n))
    generator = np.zeros((total_n + 1, total_n + 1), dtype=complex)
    generator[n, n + 1] = gamma * coupling
    generator[n + 1, n] = -gamma.conjugate() * coupling
    unitary = expm(generator)
    unitary.flags.writeable = False
    return unitary


def block_unitary(total_n, gamma):
    """Block N of U(gamma), by exact matrix exponential of the generator"""
    return _block_unitary(int(total_n), _check_gamma(gamma))


@lru_cache(maxsize=512)
def _disentangled_block(total_n, target, convention):
    # the ladder factors grow like 3^N while the product stays unitary, so the
    # product is formed in extended precision
    p, q, r = _parameters(target, convention, precision=np.longdouble)
    imbalance = (2 * np.arange(total_n + 1) - total_n).astype(np.longdouble)
    middle = np.exp(convention.middle_scale * q * imbalance)
    product = _ladder_exponential(total_n, p, True) @ (
        middle[:, None] * _ladder_exponential(total_n, r, False)
    )
    unitary = product.astype(complex)
    unitary.flags.writeable = False
    return unitary


def disentangled_block_unitary(total_n, gamma, dagger=False, convention=None):
    """Block N of U(gamma), or of U^dag(gamma) if `dagger`, from the product form"""
    if convention is None:
        convention = resolve_convention()
    gamma = _check_gamma(gamma)
    # the product form represents U^dag; U(gamma) = U^dag(-gamma)
    target = gamma if dagger else -gamma
    return _disentangled_block(int(total_n), target, convention)


def convention_deviation(convention, gamma=PROBE_GAMMA, blocks=PROBE_BLOCKS):
    """Largest entry-wise disagreement between product form and oracle"""
    return max(
        float(
            np.max(
                np.abs(
                    disentangled_block_unitary(
                        n, gamma, dagger=True, convention=convention
                    )
                    - block_unitary(n, -complex(gamma))
                )
            )
        )
        for n in blocks
    )


@lru_cache(maxsize=1)
def resolve_convention():
    """The unique candidate convention that reproduces the block exponentials"""
    agreeing = [
        c for c in CANDIDATE_CONVENTIONS if convention_deviation(c) < ORACLE_TOLERANCE
    ]
    if not agreeing:
        raise ConventionError(
            "No disentangling convention reproduces the beam-splitter oracle"
        )
    if len(agreeing) > 1:
        log.warning(
            "%d disentangling conventions agree with the oracle, using %s",
            len(agreeing),
            agreeing[0].describe(),
        )
    log.debug("Resolved disentangling convention: %s", agreeing[0].describe())
    return agreeing[0]


@dataclass(frozen=True)
class BeamSplitterConfig:
    """gamma with its disentangling parameters.

    `convention_valid` records whether the product form with these parameters
    reproduces the oracle blocks at this gamma.
    """

    gamma: complex
    p: complex
    q: float
    r: complex
    convention: Convention = field(default_factory=Convention)
    convention_valid: bool = False

    @classmethod
    def from_gamma(cls, gamma, convention=None):
        gamma = _check_gamma(gamma)
        if convention is None:
            convention = resolve_convention()
        p, q, r = disentangle(gamma, convention)
        valid = convention_deviation(convention, gamma) < ORACLE_TOLERANCE
        return cls(gamma, p, q, r, convention, valid)

    @property
    def theta(self):
        """theta in gamma = |gamma| exp(-i theta)"""
        return -cmath.phase(self.gamma)


def _apply_blockwise(state, block_matrix):
    out = np.zeros(state.amps.shape, dtype=complex)
    lost = 0.0
    weights = photon_number_distribution(state)
    for total_n, weight in enumerate(weights):
        if weight == 0.0:
            continue
        block = extract_block(state, total_n)
        lost += insert_block(out, total_n, block_matrix(total_n) @ block.amps)
    if lost > 0:
        log.debug("Beam splitter moved %.3e of probability outside the grid", lost)
    return BipartiteState(out, state.tail_bound + lost)


def apply_direct(state, gamma):
    """U(gamma) applied block by block with exact block exponentials.

    The grid is kept; probability that a block sends beyond the cutoffs is
    added to the result's tail_bound.
    """
    gamma = _check_gamma(gamma)
    return _apply_blockwise(state, lambda n: block_unitary(n, gamma))


def apply_disentangled(state, gamma, dagger=False, convention=None):
    """U(gamma), or U^dag(gamma) = U(-gamma) if `dagger`, via the product form.

    Raises ConventionError when the convention does not reproduce the oracle
    at this gamma.
    """
    config = BeamSplitterConfig.from_gamma(gamma, convention)
    if not config.convention_valid:
        raise ConventionError(
            "The disentangling convention {} disagrees with the oracle at "
            "gamma={}".format(config.convention.describe(), config.gamma)
        )
    block_matrix = partial(
        disentangled_block_unitary,
        gamma=config.gamma,
        dagger=dagger,
        convention=config.convention,
    )
    return _apply_blockwise(state, block_matrix)


apply_bs = apply_direct


def transform_block(block, gamma, method="direct"):
    """Apply U(gamma) to a single N-photon block"""
    if method == "direct":
        unitary = block_unitary(block.total_n, gamma)
    elif method == "disentangled":
        unitary = disentangled_block_unitary(block.total_n, _check_gamma(gamma))
    else:
        raise ValueError("Unknown beam-splitter method {!r}".format(method))
    amps = unitary @ block.amps
    return BlockVector(block.total_n, amps, float(np.sum(np.abs(amps) ** 2)))


@dataclass(frozen=True)
class UnitarityReport:
    gamma: complex
    n_max: int
    unitarity: float
    norm: float
    conservation: float
    equivalence: float

    @property
    def max_deviation(self):
        return max(self.unitarity, self.norm, self.conservation, self.equivalence)


def verify_unitary(gamma, n_max):
    """Check U U^dag = 1, norm and block conservation on every complete block"""
    gamma = _check_gamma(gamma)
    unitarity = equivalence = norm_dev = conservation = 0.0
    for total_n in range(n_max + 1):
        unitary = block_unitary(total_n, gamma)
        identity = np.eye(total_n + 1)
        unitarity = max(
            unitarity, float(np.max(np.abs(unitary @ unitary.conj().T - identity)))
        )
        equivalence = max(
            equivalence,
            float(
                np.max(np.abs(disentangled_block_unitary(total_n, gamma) - unitary))
            ),
        )
    # basis sample: every |n, n_max - n> plus |n, 0>
    for n in range(n_max + 1):
        for m in {n_max - n, 0}:
            amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
            amps[n, m] = 1.0
            basis = BipartiteState(amps)
            out = apply_direct(basis, gamma)
            norm_dev = max(norm_dev, abs(float(np.linalg.norm(out.amps)) - 1.0))
            conservation = max(
                conservation,
                float(
                    np.max(
                        np.abs(
                            photon_number_distribution(out)
                            - photon_number_distribution(basis)
                        )
                    )
                ),
            )
    return UnitarityReport(gamma, n_max, unitarity, norm_dev, conservation, equivalence)
