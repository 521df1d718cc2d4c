"""
Truncated Fock-space value types for one and two bosonic modes

Amplitudes are dense double-precision complex arrays indexed by photon number.
All states are immutable once built: the arrays are copied on construction and
flagged read-only, so they can be shared freely between threads and worker
processes. Operations in this module are pure functions returning new states.
"""
import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger("noonsim")

# probability mass below which a block or state is considered empty
EMPTY_WEIGHT = 1e-300


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class EmptyBlockError(DomainError):
    """Raised when a state or an N-photon block carries no probability."""

    pass


def _readonly(amps, ndim):
    arr = np.array(amps, dtype=complex)
    if arr.ndim != ndim or arr.size == 0:
        raise DomainError(
            "Expected a non-empty {}-dimensional amplitude array, "
            "got shape {}".format(ndim, arr.shape)
        )
    arr.flags.writeable = False
    return arr


def _check_tail(tail_bound):
    tail_bound = float(tail_bound)
    if not tail_bound >= 0:
        raise DomainError("tail_bound must be nonnegative, got {}".format(tail_bound))
    return tail_bound


@dataclass(frozen=True, eq=False)
class SingleModeState:
    """Amplitudes c_0..c_{n_max} of one mode.

    `tail_bound` is an upper bound on the probability discarded by truncating
    the number-state expansion at `n_max`.
    """

    amps: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amps", _readonly(self.amps, 1))
        object.__setattr__(self, "tail_bound", _check_tail(self.tail_bound))

    @property
    def n_max(self):
        return self.amps.shape[0] - 1

    @classmethod
    def from_amplitudes(cls, amps, tail_bound=0.0):
        return cls(amps, tail_bound)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Amplitude grid C_{n,m} over |n, m>, mode a on rows and mode b on columns."""

    amps: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amps", _readonly(self.amps, 2))
        object.__setattr__(self, "tail_bound", _check_tail(self.tail_bound))

    @property
    def n_max_a(self):
        return self.amps.shape[0] - 1

    @property
    def n_max_b(self):
        return self.amps.shape[1] - 1

    @classmethod
    def from_amplitudes(cls, amps, tail_bound=0.0):
        return cls(amps, tail_bound)


@dataclass(frozen=True, eq=False)
class BlockVector:
    """The total-photon-number-N component sum_n d_n |n, N-n>.

    `weight` is the probability of the block before any normalization, that is
    the post-selection probability of finding N photons in total.
    """

    total_n: int
    amps: np.ndarray
    weight: float

    def __post_init__(self):
        amps = _readonly(self.amps, 1)
        if amps.shape[0] != self.total_n + 1:
            raise DomainError(
                "Block N={} needs {} amplitudes, got {}".format(
                    self.total_n, self.total_n + 1, amps.shape[0]
                )
            )
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "weight", float(self.weight))


def vacuum(n_max_a=0, n_max_b=0):
    """The two-mode vacuum |0, 0> on a grid of the given cutoffs"""
    return fock_state(0, 0, n_max_a, n_max_b)


def fock_state(n, m, n_max_a=None, n_max_b=None):
    """The number state |n, m>; cutoffs default to n and m"""
    n_max_a = n if n_max_a is None else n_max_a
    n_max_b = m if n_max_b is None else n_max_b
    if not (0 <= n <= n_max_a and 0 <= m <= n_max_b):
        raise DomainError(
            "|{}, {}> does not fit cutoffs ({}, {})".format(n, m, n_max_a, n_max_b)
        )
    amps = np.zeros((n_max_a + 1, n_max_b + 1), dtype=complex)
    amps[n, m] = 1.0
    return BipartiteState(amps)


def tensor_product(a, b):
    """Product state a (x) b with C_{n,m} = a_n b_m"""
    tail = 1.0 - (1.0 - a.tail_bound) * (1.0 - b.tail_bound)
    return BipartiteState(np.outer(a.amps, b.amps), max(tail, 0.0))


def pad(state, n_max_a, n_max_b):
    """Embed `state` into a larger grid, filling new entries with zeros"""
    if n_max_a < state.n_max_a or n_max_b < state.n_max_b:
        raise DomainError(
            "Cannot pad a ({}, {}) grid down to ({}, {})".format(
                state.n_max_a, state.n_max_b, n_max_a, n_max_b
            )
        )
    amps = np.zeros((n_max_a + 1, n_max_b + 1), dtype=complex)
    amps[: state.n_max_a + 1, : state.n_max_b + 1] = state.amps
    return BipartiteState(amps, state.tail_bound)


def _aligned(x, y):
    """Amplitude arrays of x and y zero-padded to a common shape.

    Returns None for blocks of different N, which are orthogonal.
    """
    kinds = (BipartiteState, BlockVector, SingleModeState)
    if not any(isinstance(x, kind) and isinstance(y, kind) for kind in kinds):
        raise TypeError(
            "Cannot compare {} and {}".format(type(x).__name__, type(y).__name__)
        )
    if isinstance(x, BlockVector) and x.total_n != y.total_n:
        return None
    shape = tuple(max(a, b) for a, b in zip(x.amps.shape, y.amps.shape))
    padded = []
    for amps in (x.amps, y.amps):
        full = np.zeros(shape, dtype=complex)
        full[tuple(slice(0, s) for s in amps.shape)] = amps
        padded.append(full)
    return padded


def inner_product(x, y):
    """<x|y>, zero-padding the smaller of two grids"""
    pair = _aligned(x, y)
    if pair is None:
        return 0j
    return complex(np.vdot(*pair))


def norm(x):
    return float(np.linalg.norm(x.amps))


def normalize(x):
    """Rescale to unit norm.

    A block keeps its pre-normalization `weight`. Raises EmptyBlockError when
    there is nothing to normalize, which is how an empty post-selection shows up.
    """
    n = norm(x)
    if n * n <= EMPTY_WEIGHT:
        if isinstance(x, BlockVector):
            raise EmptyBlockError(
                "The N={} photon block is empty; nothing to post-select".format(
                    x.total_n
                )
            )
        raise EmptyBlockError("Cannot normalize a zero-norm state")
    if isinstance(x, BlockVector):
        return BlockVector(x.total_n, x.amps / n, x.weight)
    return type(x)(x.amps / n, x.tail_bound)


def block_range(n_max_a, n_max_b, total_n):
    """Mode-a photon numbers n for which |n, N-n> lies inside the grid"""
    lo = max(0, total_n - n_max_b)
    hi = min(total_n, n_max_a)
    return np.arange(lo, hi + 1)


def extract_block(x, total_n):
    """The unnormalized N-photon component d_n = C_{n, N-n}, n ascending"""
    if not 0 <= total_n <= x.n_max_a + x.n_max_b:
        raise DomainError(
            "N={} is outside 0..{}".format(total_n, x.n_max_a + x.n_max_b)
        )
    d = np.zeros(total_n + 1, dtype=complex)
    n = block_range(x.n_max_a, x.n_max_b, total_n)
    d[n] = x.amps[n, total_n - n]
    return BlockVector(total_n, d, float(np.sum(np.abs(d) ** 2)))


def insert_block(grid, total_n, values):
    """Write block amplitudes into a mutable grid.

    Returns the probability carried by entries that fall outside the grid.
    """
    values = np.asarray(values)
    n = block_range(grid.shape[0] - 1, grid.shape[1] - 1, total_n)
    grid[n, total_n - n] = values[n]
    lost = np.sum(np.abs(values) ** 2) - np.sum(np.abs(values[n]) ** 2)
    return max(float(lost), 0.0)


def photon_number_distribution(x):
    """Weight of every total-photon-number block, N = 0..n_max_a + n_max_b"""
    n, m = np.indices(x.amps.shape)
    return np.bincount(
        (n + m).ravel(),
        weights=(np.abs(x.amps) ** 2).ravel(),
        minlength=x.n_max_a + x.n_max_b + 1,
    )


def phase_distance(x, y):
    """min over phi of ||x - exp(i phi) y||, the distance up to a global phase"""
    pair = _aligned(x, y)
    if pair is None:
        return float(np.hypot(norm(x), norm(y)))
    xa, ya = pair
    # the minimizing phase is the argument of <y|x>
    phase = np.exp(1j * np.angle(np.vdot(ya, xa)))
    return float(np.linalg.norm(xa - phase * ya))


def random_state(rng, n_max, block_closed=True):
    """A normalized random state on an (n_max, n_max) grid.

    Amplitudes are complex Gaussian; with `block_closed` only |n, m> with
    n + m <= n_max are populated, so every nonzero block is complete.
    """
    shape = (n_max + 1, n_max + 1)
    amps = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    if block_closed:
        n, m = np.indices(shape)
        amps[n + m > n_max] = 0
    return normalize(BipartiteState(amps))
