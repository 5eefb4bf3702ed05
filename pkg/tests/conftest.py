import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tsgreen.fields import parse_field

settings.register_profile("tsgreen", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "tsgreen"))


@pytest.fixture(params=["GF(2)", "GF(3)", "GF(4)", "GF(9)"])
def field(request):
    return parse_field(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
