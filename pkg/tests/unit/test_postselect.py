"""
Tests for post-selection and the figures of merit in noonsim/postselect.py
"""
import cmath
import math

import numpy as np
import pytest

from noonsim import postselect
from noonsim.beamsplitter import BALANCED_GAMMA, PROBE_GAMMA, apply_direct
from noonsim.fock import DomainError, EmptyBlockError, fock_state, norm
from noonsim.postselect import (
    OverlapExponent,
    UnitarityError,
    analytic_overlap_cat,
    cat_cs_fidelity,
    cat_input,
    matching_parity,
    noon_block,
    noon_fidelity,
    noon_overlap,
    output_block,
    postselection_overlap,
    resolve_overlap_exponent,
    sv_cs_fidelity,
)
from noonsim.states import (
    CatParity,
    InputFamily,
    build_input,
    ideal_input,
    required_input,
)

SV_N4_MAXIMUM = (2 + math.sqrt(3)) / 4


def test_noon_block():
    block = noon_block(3)
    assert norm(block) == pytest.approx(1)
    assert block.amps[0] == block.amps[3] == pytest.approx(1 / math.sqrt(2))


@pytest.mark.parametrize("total_n", [2, 4, 6, 8, 10])
def test_ideal_input_gives_noon(total_n):
    out = apply_direct(ideal_input(total_n), BALANCED_GAMMA)
    assert noon_fidelity(out, total_n) == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("total_n", [1, 2, 3, 5])
def test_required_input_gives_noon(total_n):
    state = required_input(total_n, PROBE_GAMMA)
    result = postselect.postselect(state, total_n, PROBE_GAMMA)
    assert result.fidelity == pytest.approx(1, abs=1e-10)
    assert result.overlap_with_ideal == pytest.approx(1, abs=1e-10)


def test_single_photon_fidelity_is_half():
    """|0, 1> leaves the 50-50 splitter with relative phase i between arms"""
    result = postselect.postselect(fock_state(0, 1), 1)
    assert result.fidelity == pytest.approx(0.5)
    assert result.block_probability == pytest.approx(1)
    assert sv_cs_fidelity(0.0, 1.0, 1) == pytest.approx(0.5)


def test_empty_block():
    with pytest.raises(EmptyBlockError):
        noon_fidelity(fock_state(1, 0, 2, 2), 2)
    with pytest.raises(EmptyBlockError):
        postselect.postselect(fock_state(0, 0, 2, 2), 2)


def test_overlap_is_probability_times_fidelity(random_states):
    for state in random_states(5, n_max=6):
        for total_n in (2, 3, 4):
            result = postselect.postselect(state, total_n, PROBE_GAMMA)
            assert result.overlap_with_ideal == pytest.approx(
                result.block_probability * result.fidelity, abs=1e-14
            )
            assert result.overlap_with_ideal == pytest.approx(
                noon_overlap(state, total_n, PROBE_GAMMA), abs=1e-14
            )


def test_output_block_keeps_weight(random_states):
    state = random_states(1)[0]
    assert output_block(state, 4).weight == pytest.approx(
        float(np.sum(np.abs(np.diag(np.fliplr(state.amps[:5, :5]))) ** 2))
    )


def test_postselection_overlap_paths_agree(random_states):
    for state in random_states(5, n_max=8):
        for total_n in (2, 4, 6):
            value = postselection_overlap(state, total_n)
            assert 0 <= value <= 1
            value = postselection_overlap(state, total_n, PROBE_GAMMA)
            assert 0 <= value <= 1


def test_postselection_overlap_of_ideal_input():
    assert postselection_overlap(ideal_input(4), 4) == pytest.approx(1)


def test_postselection_overlap_mismatch(monkeypatch):
    monkeypatch.setattr(postselect, "noon_overlap", lambda *args: 0.0)
    with pytest.raises(UnitarityError):
        postselection_overlap(ideal_input(2), 2)


@pytest.mark.parametrize("total_n", [0, 3, 2.5])
def test_postselection_overlap_needs_even_n(total_n):
    with pytest.raises(DomainError):
        postselection_overlap(ideal_input(2), total_n)


def test_matching_parity():
    assert matching_parity(4) is CatParity.EVEN
    assert matching_parity(8) is CatParity.EVEN
    assert matching_parity(2) is CatParity.ODD
    assert matching_parity(6) is CatParity.ODD


def test_overlap_exponent():
    assert resolve_overlap_exponent() is OverlapExponent.TWO_N
    assert OverlapExponent.TWO_N.power(3) == 6
    assert OverlapExponent.SQUARE.power(3) == 2


@pytest.mark.parametrize("total_n", [2, 4, 6, 8])
@pytest.mark.parametrize("alpha_mag", [0.3, 0.9, 1.7, 2.6])
def test_analytic_overlap_matches_numerics(total_n, alpha_mag):
    parity = matching_parity(total_n)
    numeric = postselection_overlap(cat_input(alpha_mag, total_n), total_n)
    assert analytic_overlap_cat(alpha_mag, total_n, parity) == pytest.approx(
        numeric, abs=1e-10
    )


def test_analytic_overlap_edges():
    assert analytic_overlap_cat(0, 4, CatParity.EVEN) == 0
    with pytest.raises(DomainError):
        analytic_overlap_cat(-1, 4, CatParity.EVEN)
    with pytest.raises(DomainError):
        analytic_overlap_cat(1, 3, CatParity.ODD)


@pytest.mark.parametrize("total_n", [2, 4, 6, 8])
@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_phase_locked_cats_are_perfect(total_n, beta):
    parity = matching_parity(total_n)
    assert cat_cs_fidelity(beta, 1j * beta, total_n, parity) == pytest.approx(
        1, abs=1e-9
    )


@pytest.mark.parametrize("r, alpha", [(0.3, 1.0), (1.2, 0.5), (0.8, 2.0j)])
def test_squeezed_vacuum_misses_n_two_mod_four(r, alpha):
    """Squeezed vacuum holds even photon numbers only, the N=2 and N=6 ideal
    inputs need odd ones in mode a"""
    assert sv_cs_fidelity(r, alpha, 2) == pytest.approx(0, abs=1e-14)
    assert sv_cs_fidelity(r, alpha, 6) == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("r", [0.2, 0.5, 1.4])
def test_squeezed_vacuum_n_four_maximum(r):
    """The best N=4 fidelity is (2 + sqrt 3)/4 at |alpha|^4 = 3 tanh^2 r"""
    alpha = (3 * math.tanh(r) ** 2) ** 0.25
    assert sv_cs_fidelity(r, alpha, 4) == pytest.approx(SV_N4_MAXIMUM, abs=1e-9)
    assert sv_cs_fidelity(r, 1.1 * alpha, 4) < SV_N4_MAXIMUM
    assert sv_cs_fidelity(r, 0.9 * alpha, 4) < SV_N4_MAXIMUM


@pytest.mark.parametrize("amplitude", [0.3, 0.8, 1.5])
def test_three_photons_stay_at_half(amplitude):
    for alpha in (0.5, 1.0, 1.0j, 1.3 + 0.4j):
        assert sv_cs_fidelity(amplitude, alpha, 3) <= 0.5 + 1e-12
        for parity in CatParity:
            assert cat_cs_fidelity(amplitude, alpha, 3, parity) <= 0.5 + 1e-12


def test_sv_cs_empty_block():
    with pytest.raises(EmptyBlockError):
        sv_cs_fidelity(0.0, 0.0, 4)


def test_fidelity_matches_full_state():
    """Block-only post-selection agrees with transforming the whole state"""
    state = build_input(InputFamily.sv_cs(0.6, 1.1), n_max=12)
    full = apply_direct(state, BALANCED_GAMMA)
    assert noon_fidelity(full, 4) == pytest.approx(
        sv_cs_fidelity(0.6, 1.1, 4), abs=1e-12
    )


@pytest.mark.parametrize("total_n", [2, 3, 4, 6])
@pytest.mark.parametrize("phi", [0.3, 1.9, -2.6])
def test_joint_rotation_leaves_figures_unchanged(total_n, phi):
    """Rotating beta and alpha together only rephases the N-photon block"""
    rotation = cmath.exp(1j * phi)
    for family in (
        InputFamily.ecs_cs(0.8, 0.6 + 0.5j),
        InputFamily.ocs_cs(1.1 - 0.2j, 0.9j),
    ):
        rotated = InputFamily(
            family.tag, family.amplitude * rotation, family.alpha * rotation
        )
        before = postselect.postselect(build_input(family, n_max=total_n), total_n)
        after = postselect.postselect(build_input(rotated, n_max=total_n), total_n)
        assert after.fidelity == pytest.approx(before.fidelity, abs=1e-12)
        assert after.overlap_with_ideal == pytest.approx(
            before.overlap_with_ideal, abs=1e-12
        )
        assert after.block_probability == pytest.approx(
            before.block_probability, abs=1e-12
        )


def test_sv_cs_tiny_amplitudes():
    """A faint but nonempty block still gives a finite fidelity"""
    fidelity = sv_cs_fidelity(1e-4, 1e-4, 4)
    assert math.isfinite(fidelity)
    assert 0 < fidelity <= 1
