import time

import numpy as np
import pytest

# entries of the worked three-asset example are quoted in units of 1e-4
UNIT = 1e-4

BASE3 = UNIT * np.diag([144.0, 36.0, 625.0])

# printed tangent direction (six decimals; its trace is 1e-6, not 0)
X_PRINTED = np.array([
    [-0.007613, 0.094822, 0.074094],
    [0.094822, -0.016781, 0.153825],
    [0.074094, 0.153825, 0.024395],
])

# printed stressed covariance, two decimals in 1e-4 units
TARGET_PRINTED = UNIT * np.array([
    [144.0, 7.2, 24.76],
    [7.2, 36.0, 23.84],
    [24.76, 23.84, 649.90],
])

SUM_SQ_PRINTED = 0.077222

# equities, bonds, commodity; the stressed bond-equity covariance and both
# variances are fixed, the commodity row is free
PINNED3 = {(0, 0): 144.0 * UNIT, (1, 1): 36.0 * UNIT, (0, 1): 7.2 * UNIT}


def random_spd(rng, n, cond=10.0):
    """SPD matrix with log-uniform spectrum spanning ``cond``."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.exp(rng.uniform(0.0, np.log(cond), n))
    lam[0], lam[-1] = 1.0, cond
    s = (q * lam) @ q.T
    return 0.5 * (s + s.T)


def random_spd_separated(rng, n):
    """SPD matrix whose eigenvalues are at least 1 apart."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.cumsum(rng.uniform(1.0, 2.0, n))
    s = (q * lam) @ q.T
    return 0.5 * (s + s.T)


def random_traceless(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    a = 0.5 * (a + a.T)
    return a - np.trace(a) / n * np.eye(n)


def random_antisym(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a - a.T)


def random_unit_rotation(rng, n):
    """Antisymmetric generator with ``||A||_F = sqrt(2)``: one radian per unit t."""
    a = random_antisym(rng, n)
    return a * np.sqrt(2.0) / np.linalg.norm(a)


def rel_fro(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def base3():
    return BASE3.copy()


@pytest.fixture
def x_printed():
    return X_PRINTED.copy()


@pytest.fixture
def target_printed():
    return TARGET_PRINTED.copy()


ACCEPTANCE_LINES = {}
_START = []


def pytest_sessionstart(session):
    _START.append(time.perf_counter())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
    elapsed = time.perf_counter() - _START[0]
    status = "PASS" if elapsed < 60 else "FAIL"
    terminalreporter.write_line(f"suite runtime {elapsed:.1f} s (< 60 s): {status}")
