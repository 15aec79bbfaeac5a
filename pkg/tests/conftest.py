import json

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numerics",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numerics")

import dwset as dw


@pytest.fixture(scope="session")
def z2():
    return dw.rational_map([0, 0, 1])


@pytest.fixture(scope="session")
def z3():
    return dw.rational_map([0, 0, 0, 1])


@pytest.fixture(scope="session")
def z2_plus_1():
    return dw.rational_map([1, 0, 1])


@pytest.fixture(scope="session")
def power_gens(z2, z3):
    return dw.GeneratorSet.of(z2, z3)


@pytest.fixture(scope="session")
def parabolic_cubic():
    # (z^3 + 1/2)/(1 + z^3/2), parabolic boundary fixed point at 1
    return dw.blaschke_power(dw.BlaschkePowerParams(3, 0.5))


def write_spec(path, generators, settings_block=None):
    doc = {"schema": "dwset-spec/1", "generators": generators}
    if settings_block:
        doc["settings"] = settings_block
    path.write_text(json.dumps(doc))
    return str(path)


POWERS_SPEC = [
    {"num": [[0, 0], [0, 0], [1, 0]]},
    {"num": [[0, 0], [0, 0], [0, 0], [1, 0]]},
]
Z2P1_SPEC = [{"num": [[1, 0], [0, 0], [1, 0]]}]
