import numpy as np
import pytest

from isac_offload.scenario import Decision, Scenario


@pytest.fixture
def table1():
    return Scenario()


@pytest.fixture
def overhead_ue(table1):
    """UAV directly above the UE at (100, 120)."""
    return Decision(0.5, 100.0, 120.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
