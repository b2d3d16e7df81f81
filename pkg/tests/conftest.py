import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hopfcoh import _kernels
from hopfcoh.comodule import build_dual_numbers_comodule, self_comodule, trivial_coefficients
from hopfcoh.exactmath import Field
from hopfcoh.groups import cyclic
from hopfcoh.hopf import build_function_hopf, build_sweedler_h4

settings.register_profile(
    "hopfcoh", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("hopfcoh")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile (or load cached) numba kernels once so timing bounds measure the math
    _kernels.warmup()


@pytest.fixture(scope="session")
def F3():
    return Field.prime(3)


@pytest.fixture(scope="session")
def F5():
    return Field.prime(5)


@pytest.fixture(scope="session")
def H4(F3):
    return build_sweedler_h4(F3)


@pytest.fixture(scope="session")
def E2(F3, H4):
    return build_dual_numbers_comodule(F3, H4)


@pytest.fixture(scope="session")
def kZ2(F3):
    return build_function_hopf(cyclic(2), F3)


@pytest.fixture(scope="session")
def k_over_kZ2(kZ2):
    return trivial_coefficients(kZ2)


@pytest.fixture(scope="session")
def kZ2_self(kZ2):
    return self_comodule(kZ2)


def vec(*pairs, n=8, p=3):
    """Coordinate vector from (index, value) pairs."""
    out = np.zeros(n, dtype=np.int64)
    for i, v in pairs:
        out[i] = v % p
    return out
