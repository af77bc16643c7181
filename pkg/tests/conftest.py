import numpy as np
import pytest

from bellmono.states import PAULIS

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def random_unitary(rng, dim):
    """exp(iK) for a random Hermitian generator K."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    k = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(k)
    return (v * np.exp(1j * w)) @ v.conj().T


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_ket(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def bloch_observable(n):
    return sum(c * p for c, p in zip(n, PAULIS))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number = marker.args[0]
    ACCEPTANCE[number] = (item.name, "PASS" if report.passed else "FAIL")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, status = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  ({name})")
