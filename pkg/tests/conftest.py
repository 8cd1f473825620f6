import numpy as np
import pytest


def rotation(n_modes, mode, angle):
    """Phase rotation on one mode, as a 2N x 2N symplectic matrix."""
    s = np.eye(2 * n_modes)
    c, si = np.cos(angle), np.sin(angle)
    s[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = [[c, si], [-si, c]]
    return s


def beam_splitter(n_modes, i, j, transmission):
    s = np.eye(2 * n_modes)
    a, b = np.sqrt(transmission), np.sqrt(1 - transmission)
    for k in (0, 1):
        ii, jj = 2 * i + k, 2 * j + k
        s[ii, ii], s[ii, jj], s[jj, ii], s[jj, jj] = a, b, -b, a
    return s


def squeezer(n_modes, mode, r):
    s = np.eye(2 * n_modes)
    s[2 * mode, 2 * mode] = np.exp(-r)
    s[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return s


def random_symplectic(n_modes, rng, layers=3):
    s = np.eye(2 * n_modes)
    for _ in range(layers):
        for m in range(n_modes):
            s = rotation(n_modes, m, rng.uniform(0, 2 * np.pi)) @ s
            s = squeezer(n_modes, m, rng.uniform(-1, 1)) @ s
        for m in range(n_modes - 1):
            s = beam_splitter(n_modes, m, m + 1, rng.uniform(0.05, 0.95)) @ s
    return s


def random_cm(n_modes, rng, pure=False):
    """Physical CM with known spectrum: S diag(nu) S^T."""
    nu = np.ones(n_modes) if pure else rng.uniform(1, 20, n_modes)
    s = random_symplectic(n_modes, rng)
    return s @ np.diag(np.repeat(nu, 2)) @ s.T, np.sort(nu)


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
