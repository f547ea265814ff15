import pytest

from srrw import EtaKernel, RayKnightSampler, WeightFunction, stationary_distribution


@pytest.fixture(scope="session")
def w_exp():
    return WeightFunction("exponential", (1.0,))


@pytest.fixture(scope="session")
def w_ramp():
    return WeightFunction("linear_ramp", (1.0, 1.0))


@pytest.fixture(scope="session")
def kernel_exp(w_exp):
    return EtaKernel(w_exp)


@pytest.fixture(scope="session")
def stationary_exp(kernel_exp):
    return stationary_distribution(kernel_exp)


@pytest.fixture(scope="session")
def sampler_exp(w_exp):
    return RayKnightSampler(w_exp)


@pytest.fixture(scope="session")
def sampler_ramp(w_ramp):
    return RayKnightSampler(w_ramp)
