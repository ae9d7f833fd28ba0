from dataclasses import replace

import pytest

from gainslab.medium import SAMPLE_MEDIUM, GainMedium, PumpScheme


@pytest.fixture
def sample() -> GainMedium:
    """The semiconductor slab every quantitative check runs against."""
    return SAMPLE_MEDIUM


@pytest.fixture
def sample_uniform(sample) -> GainMedium:
    return replace(sample, nu=0.0)


@pytest.fixture
def sample_single(sample) -> GainMedium:
    return replace(sample, pump=PumpScheme.SINGLE)
