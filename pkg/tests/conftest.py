"""Shared fixtures: the two reference reconstructions, built once per session."""

from __future__ import annotations

import numpy as np
import pytest

from ctinv.ctcore import InputSet
from ctinv.glm import RadialGrid, potential, solve_kernel

# Reference configurations used throughout: a single even shift with
# delta_0 = 0.2*pi (chosen L = -0.4), and the two-shift set reconstructed
# from the Woods-Saxon phases (L = {-0.3056, 0.9295}).
REF1_S = (0,)
REF1_DELTAS = (0.2 * np.pi,)
REF1_T = (-0.4,)

REF2_S = (0, 1)
REF2_DELTAS = (0.4389, 0.1246)
REF2_T = (-0.3056, 0.9295)


@pytest.fixture(scope="session")
def grid400():
    return RadialGrid(0.005, 400.0)


@pytest.fixture(scope="session")
def ref1_input():
    return InputSet(REF1_S, REF1_DELTAS)


@pytest.fixture(scope="session")
def ref2_input():
    return InputSet(REF2_S, REF2_DELTAS)


@pytest.fixture(scope="session")
def ref1_kernel(ref1_input, grid400):
    return solve_kernel(ref1_input, REF1_T, grid400)


@pytest.fixture(scope="session")
def ref1_profile(ref1_input, grid400, ref1_kernel):
    return potential(ref1_input, REF1_T, grid400, kernel=ref1_kernel)


@pytest.fixture(scope="session")
def ref2_kernel(ref2_input, grid400):
    return solve_kernel(ref2_input, REF2_T, grid400)


@pytest.fixture(scope="session")
def ref2_profile(ref2_input, grid400, ref2_kernel):
    return potential(ref2_input, REF2_T, grid400, kernel=ref2_kernel)
