"""Shared fixtures: the reference operating point and a few standard states."""

import pytest

from epr_memory.gaussian_core import make_epr
from epr_memory.mapping_model import EnsembleParams, derive_rates

# Closed-form values at C=100, kappa=2, gamma0=1e-3, Gamma_E=15 (gamma = 1).
REFERENCE_GAMMA_TILDE0 = 0.001 + 15.0 / 201.0
REFERENCE_TRANSFER = 6000.0 / 201.0 ** 2
REFERENCE_EMISSION = 30.0 / 201.0 ** 2
REFERENCE_COUPLING = REFERENCE_TRANSFER / (2.0 * REFERENCE_GAMMA_TILDE0)
REFERENCE_NOISE = (0.002 + REFERENCE_EMISSION) / REFERENCE_GAMMA_TILDE0


@pytest.fixture
def reference_params():
    return EnsembleParams.reference()


@pytest.fixture
def reference_rates(reference_params):
    return derive_rates(reference_params)


@pytest.fixture
def deep_params():
    """Deeper adiabatic regime: gamma0 = 1e-4 and gamma_tilde0 = 0.01."""
    return EnsembleParams.from_rates(100.0, (0.01 - 1e-4) * 201.0, gamma0=1e-4)


@pytest.fixture
def epr_state():
    return make_epr(0.5)
