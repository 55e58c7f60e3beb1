import pytest

from ffzeta import backend


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # jit compilation happens once here, not inside timed tests
    backend.warm_up()
