"""
Tests for the truncated Fock-space types in noonsim/fock.py
"""
import cmath
import math

import numpy as np
import pytest

from noonsim.fock import (
    BipartiteState,
    BlockVector,
    DomainError,
    EmptyBlockError,
    SingleModeState,
    extract_block,
    fock_state,
    inner_product,
    insert_block,
    norm,
    normalize,
    pad,
    phase_distance,
    photon_number_distribution,
    random_state,
    tensor_product,
    vacuum,
)


def test_states_are_immutable():
    """Amplitudes are copied on construction and cannot be written"""
    source = np.array([1.0, 0.0, 0.0])
    state = SingleModeState.from_amplitudes(source)
    source[0] = 5.0
    assert state.amps[0] == 1.0
    with pytest.raises(ValueError):
        state.amps[0] = 2.0


@pytest.mark.parametrize(
    "cls, amps",
    [
        (SingleModeState, np.zeros((2, 2))),
        (SingleModeState, []),
        (BipartiteState, np.zeros(3)),
    ],
)
def test_wrong_shape(cls, amps):
    with pytest.raises(DomainError):
        cls(amps)


def test_negative_tail_bound():
    with pytest.raises(DomainError):
        SingleModeState([1.0], tail_bound=-1e-3)


def test_block_vector_length():
    with pytest.raises(DomainError):
        BlockVector(3, np.zeros(3), 0.0)


def test_fock_state():
    state = fock_state(1, 2)
    assert state.amps.shape == (2, 3)
    assert state.amps[1, 2] == 1
    assert norm(state) == 1
    assert vacuum(2, 3).amps[0, 0] == 1
    with pytest.raises(DomainError):
        fock_state(3, 0, 2, 2)


def test_tensor_product():
    a = SingleModeState([0.6, 0.8], tail_bound=0.1)
    b = SingleModeState([1.0, 0.0, 0.0], tail_bound=0.2)
    state = tensor_product(a, b)
    assert state.amps.shape == (2, 3)
    assert state.amps[1, 0] == pytest.approx(0.8)
    assert state.tail_bound == pytest.approx(0.28)


def test_inner_product_pads_grids():
    small = fock_state(1, 0)
    large = fock_state(1, 0, 3, 3)
    assert inner_product(small, large) == pytest.approx(1)
    assert inner_product(small, fock_state(0, 1, 3, 3)) == 0


def test_inner_product_blocks():
    x = BlockVector(1, [1, 0], 1.0)
    y = BlockVector(2, [1, 0, 0], 1.0)
    assert inner_product(x, y) == 0
    assert inner_product(x, BlockVector(1, [1j, 0], 1.0)) == pytest.approx(1j)


def test_inner_product_mixed_types():
    with pytest.raises(TypeError):
        inner_product(fock_state(0, 0), SingleModeState([1.0]))


def test_pad_cannot_shrink():
    with pytest.raises(DomainError):
        pad(fock_state(2, 2), 1, 2)


def test_normalize():
    state = normalize(BipartiteState([[3.0, 0.0], [0.0, 4.0]]))
    assert norm(state) == pytest.approx(1)
    assert state.amps[1, 1] == pytest.approx(0.8)


def test_normalize_keeps_block_weight():
    block = normalize(BlockVector(1, [3.0, 4.0], 25.0))
    assert block.weight == 25.0
    assert norm(block) == pytest.approx(1)


@pytest.mark.parametrize(
    "state",
    [BipartiteState(np.zeros((2, 2))), BlockVector(2, np.zeros(3), 0.0)],
)
def test_normalize_empty(state):
    with pytest.raises(EmptyBlockError):
        normalize(state)


def test_extract_block():
    """d_n = C_{n, N-n}, zero where |n, N-n> is off the grid"""
    state = BipartiteState(np.arange(9).reshape(3, 3))
    block = extract_block(state, 2)
    assert list(block.amps) == [2, 4, 6]
    assert block.weight == 56

    block = extract_block(state, 3)
    assert list(block.amps) == [0, 5, 7, 0]

    with pytest.raises(DomainError):
        extract_block(state, 5)


def test_insert_block_reports_lost_weight():
    grid = np.zeros((2, 2), dtype=complex)
    assert insert_block(grid, 1, [0.6, 0.8]) == 0
    assert grid[0, 1] == pytest.approx(0.6)
    assert grid[1, 0] == pytest.approx(0.8)

    grid = np.zeros((2, 2), dtype=complex)
    assert insert_block(grid, 3, [1, 1, 1, 1]) == pytest.approx(4)
    assert not grid.any()


def test_photon_number_distribution(random_states):
    for state in random_states(5, n_max=4):
        weights = photon_number_distribution(state)
        assert len(weights) == 9
        assert weights.sum() == pytest.approx(norm(state) ** 2)
        assert weights[2] == pytest.approx(extract_block(state, 2).weight)


def test_phase_distance(random_states):
    state = random_states(1)[0]
    rotated = BipartiteState(state.amps * cmath.exp(0.7j))
    assert phase_distance(state, rotated) < 1e-12
    assert phase_distance(state, fock_state(0, 0, 6, 6)) > 0


def test_phase_distance_resolves_tiny_differences():
    """Distances far below sqrt(machine epsilon) are reported, not rounded to 1e-8"""
    eps = 1e-11
    x = SingleModeState([1.0, 0.0])
    y = SingleModeState(np.array([1.0, eps]) * cmath.exp(0.4j) / math.hypot(1, eps))
    assert phase_distance(x, y) == pytest.approx(eps, rel=1e-3)

    state = fock_state(1, 2, 3, 3)
    rotated = pad(BipartiteState(state.amps * cmath.exp(-2.1j)), 5, 4)
    assert phase_distance(state, rotated) < 1e-14


def test_phase_distance_between_blocks():
    x = BlockVector(1, [1, 0], 1.0)
    assert phase_distance(x, BlockVector(1, [0, 1j], 1.0)) == pytest.approx(
        math.sqrt(2)
    )
    assert phase_distance(x, BlockVector(2, [0, 1, 0], 1.0)) == pytest.approx(
        math.sqrt(2)
    )
    with pytest.raises(TypeError):
        phase_distance(x, SingleModeState([1.0, 0.0]))


def test_random_state(rng):
    state = random_state(rng, 5)
    n, m = np.indices(state.amps.shape)
    assert norm(state) == pytest.approx(1)
    assert not state.amps[n + m > 5].any()
    assert state.amps[n + m <= 5].all()
