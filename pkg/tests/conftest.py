import numpy as np
import pytest

from schmidtcorr import cases, embed_amplitude, schmidt_decompose


@pytest.fixture
def rng(request):
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def noisy_quadratic_512():
    dist = cases.noisy_quadratic(512)
    return dist, schmidt_decompose(embed_amplitude(dist))


@pytest.fixture(scope="session")
def four_variable_spec():
    from schmidtcorr import GaussianSpec

    return GaussianSpec(cases.FOUR_VARIABLE_CORRELATION, 2)


def random_spd(rng, n, cond=10.0):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    w = np.exp(rng.uniform(0, np.log(cond), size=n))
    return (q * w) @ q.T


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
