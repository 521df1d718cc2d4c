"""
Shared fixtures for the noonsim test suite
"""
import numpy as np
import pytest

from noonsim.fock import phase_distance, random_state


@pytest.fixture()
def rng():
    """A seeded generator, so every test sees the same random states"""
    return np.random.default_rng(20200601)


@pytest.fixture()
def random_states(rng):
    """Factory for block-closed random bipartite states"""

    def make(count, n_max=6):
        return [random_state(rng, n_max) for _ in range(count)]

    return make


@pytest.fixture()
def assert_same_up_to_phase():
    """Assert two states agree up to a global phase"""

    def check(x, y, tol=1e-10):
        distance = phase_distance(x, y)
        assert distance < tol, "states differ by {:.3e}".format(distance)

    return check
