# Fixtures shared by the test packages below src/ludreg.

import numpy as np
import pytest

from ludreg.python.test.util import tmpfile  # noqa: F401


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def generate_fixture(d):
    @pytest.fixture()
    def fixture():
        return np.random.default_rng(1000 + d)
    globals()['rng_dim%i' % d] = fixture


for d in [3, 4]:
    generate_fixture(d)
del generate_fixture


@pytest.fixture(params=[2, 3, 4, 5, 6, 8])
def dims(request):
    return request.param


@pytest.fixture(params=[2, 3, 4])
def small_dims(request):
    return request.param


def pytest_configure(config):
    markexpr = config.getoption("markexpr", 'False')
    if 'not slow' not in markexpr:
        print('\033[93mRunning the full test suite. To skip slow tests, '
              'please run \'pytest -m "not slow"\' \033[0m')

    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with -m 'not slow')"
    )
