"""
Tests for noonsim/beamsplitter.py
"""
import cmath
import math

import numpy as np
import pytest

from noonsim.beamsplitter import (
    BALANCED_GAMMA,
    CANDIDATE_CONVENTIONS,
    PROBE_GAMMA,
    BeamSplitterConfig,
    ConventionError,
    Convention,
    apply_bs,
    apply_direct,
    apply_disentangled,
    block_unitary,
    convention_deviation,
    disentangle,
    disentangled_block_unitary,
    resolve_convention,
    transform_block,
    verify_unitary,
)
from noonsim.fock import (
    DomainError,
    extract_block,
    fock_state,
    norm,
    photon_number_distribution,
)

GAMMAS = [BALANCED_GAMMA, math.pi / 4, PROBE_GAMMA, 0.1 - 0.4j]


def test_single_photon_block():
    """|0, 1> -> (|0, 1> + i|1, 0>) / sqrt(2) on the 50-50 splitter"""
    unitary = block_unitary(1, BALANCED_GAMMA)
    expected = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    assert np.allclose(unitary, expected, atol=1e-14)


def test_hong_ou_mandel():
    out = apply_direct(fock_state(1, 1, 2, 2), BALANCED_GAMMA)
    assert abs(out.amps[1, 1]) < 1e-14
    assert abs(out.amps[2, 0]) == pytest.approx(1 / math.sqrt(2))
    assert abs(out.amps[0, 2]) == pytest.approx(1 / math.sqrt(2))


def test_apply_bs_is_direct():
    assert apply_bs is apply_direct


def test_balanced_parameters():
    p, q, r = disentangle(BALANCED_GAMMA)
    assert p == pytest.approx(-1j)
    assert r == pytest.approx(-1j)
    assert q == pytest.approx(math.log(2))


def test_real_gamma_parameters():
    """p = -r only for real gamma"""
    p, q, r = disentangle(0.3)
    assert p == pytest.approx(-r)
    assert p == pytest.approx(math.tan(0.3))
    assert q == pytest.approx(2 * math.log(1 / math.cos(0.3)))


def test_zero_gamma():
    assert disentangle(0) == (0, 0, 0)
    assert np.allclose(block_unitary(3, 0), np.eye(4))
    assert np.allclose(disentangled_block_unitary(3, 0), np.eye(4))


@pytest.mark.parametrize("gamma", [math.pi / 2, 2.0, 1.6j])
def test_gamma_out_of_range(gamma):
    with pytest.raises(DomainError):
        block_unitary(2, gamma)
    with pytest.raises(DomainError):
        disentangle(gamma)


def test_resolved_convention():
    convention = resolve_convention()
    assert convention == Convention(sigma=1, conjugate_p=True, middle_scale=0.5)
    assert convention_deviation(convention) < 1e-10


def test_only_one_candidate_agrees():
    agreeing = [c for c in CANDIDATE_CONVENTIONS if convention_deviation(c) < 1e-10]
    assert len(agreeing) == 1
    assert len(CANDIDATE_CONVENTIONS) == 8


@pytest.mark.parametrize("gamma", GAMMAS)
@pytest.mark.parametrize("total_n", [0, 1, 2, 5, 8, 12])
def test_product_form_matches_oracle(gamma, total_n):
    product = disentangled_block_unitary(total_n, gamma)
    assert np.max(np.abs(product - block_unitary(total_n, gamma))) < 1e-10
    dagger = disentangled_block_unitary(total_n, gamma, dagger=True)
    assert np.max(np.abs(dagger - block_unitary(total_n, gamma).conj().T)) < 1e-10


def test_block_unitary_is_cached_and_readonly():
    unitary = block_unitary(4, PROBE_GAMMA)
    assert unitary is block_unitary(4, PROBE_GAMMA)
    with pytest.raises(ValueError):
        unitary[0, 0] = 0


@pytest.mark.parametrize("gamma", GAMMAS)
def test_apply_equivalence(gamma, random_states):
    for state in random_states(10, n_max=8):
        direct = apply_direct(state, gamma)
        product = apply_disentangled(state, gamma)
        assert np.max(np.abs(direct.amps - product.amps)) < 1e-10
        assert norm(direct) == pytest.approx(1, abs=1e-12)
        assert np.allclose(
            photon_number_distribution(direct),
            photon_number_distribution(state),
            atol=1e-12,
        )


@pytest.mark.parametrize("gamma", GAMMAS)
def test_round_trip(gamma, random_states):
    for state in random_states(5, n_max=8):
        back = apply_disentangled(apply_direct(state, gamma), gamma, dagger=True)
        assert np.max(np.abs(back.amps - state.amps)) < 1e-10


def test_weight_leaving_the_grid_goes_to_tail():
    """|1, 1> on a (1, 1) grid is sent entirely to |2, 0> and |0, 2>"""
    out = apply_direct(fock_state(1, 1, 1, 1), BALANCED_GAMMA)
    assert out.amps.shape == (2, 2)
    assert np.max(np.abs(out.amps)) < 1e-14
    assert out.tail_bound == pytest.approx(1)


def test_transform_block():
    block = extract_block(fock_state(2, 1, 3, 3), 3)
    direct = transform_block(block, PROBE_GAMMA)
    product = transform_block(block, PROBE_GAMMA, method="disentangled")
    assert np.allclose(direct.amps, product.amps, atol=1e-12)
    assert direct.weight == pytest.approx(1)
    with pytest.raises(ValueError):
        transform_block(block, PROBE_GAMMA, method="taylor")


def test_beam_splitter_config():
    config = BeamSplitterConfig.from_gamma(BALANCED_GAMMA)
    assert config.convention_valid
    assert config.p == pytest.approx(-1j)
    assert config.q == pytest.approx(math.log(2))
    assert config.theta == pytest.approx(-math.pi / 2)

    wrong = BeamSplitterConfig.from_gamma(
        BALANCED_GAMMA, Convention(sigma=-1, conjugate_p=True, middle_scale=0.5)
    )
    assert not wrong.convention_valid


def test_beam_splitter_config_checks_its_own_gamma():
    flipped = Convention(sigma=-1, conjugate_p=True, middle_scale=0.5)
    # every convention reduces to the identity at gamma = 0
    assert BeamSplitterConfig.from_gamma(0, flipped).convention_valid
    assert not BeamSplitterConfig.from_gamma(math.pi / 4, flipped).convention_valid
    assert BeamSplitterConfig.from_gamma(0.1 - 0.4j).convention_valid
    with pytest.raises(DomainError):
        BeamSplitterConfig.from_gamma(2.0)


def test_apply_disentangled_refuses_bad_convention():
    flipped = Convention(sigma=-1, conjugate_p=True, middle_scale=0.5)
    with pytest.raises(ConventionError):
        apply_disentangled(fock_state(1, 0, 2, 2), PROBE_GAMMA, convention=flipped)


def test_convention_describe():
    text = resolve_convention().describe()
    assert "sigma=+1" in text
    assert "conj(gamma)" in text


@pytest.mark.parametrize("gamma", [BALANCED_GAMMA, PROBE_GAMMA])
def test_verify_unitary(gamma):
    report = verify_unitary(gamma, 10)
    assert report.max_deviation < 1e-10


def test_polar_gamma_phase():
    """A gamma given in polar form gives |p| = |r| = tan|gamma|"""
    gamma = cmath.rect(0.5, 1.1)
    p, _, r = disentangle(gamma)
    assert abs(p) == pytest.approx(math.tan(0.5))
    assert abs(r) == pytest.approx(math.tan(0.5))
