"""Shared fixtures."""

import numpy as np
import pytest

from app.core.logging import setup_logging
from app.models.domain import Scenario
from app.waveplate.model import half_waveplate_frequency
from app.waveplate.presets import REFERENCE_MODEL
from app.weak.engine import waveplate_response


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    setup_logging(level="WARNING")


@pytest.fixture
def reference_model():
    """slope_te = 1.2, slope_tm = 0.8, zero intercepts."""
    return REFERENCE_MODEL


@pytest.fixture
def scenario(reference_model):
    return Scenario.default(reference_model)


@pytest.fixture
def response(scenario):
    return waveplate_response(scenario)


@pytest.fixture
def omega_s(reference_model):
    return half_waveplate_frequency(reference_model, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
