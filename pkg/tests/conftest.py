import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from smallperiod.spectrum import FourierField  # noqa: E402


@st.composite
def fields(draw, K=None, max_K=16, scale=1.0):
    """Arbitrary valid fields built from their k >= 1 half."""
    K = K or draw(st.integers(1, max_K))
    fl = st.floats(-scale, scale, allow_nan=False, allow_infinity=False)
    re = draw(st.lists(fl, min_size=K, max_size=K))
    im = draw(st.lists(fl, min_size=K, max_size=K))
    half = np.zeros(K + 1, dtype=complex)
    half[1:] = np.array(re) + 1j * np.array(im)
    return FourierField.from_half(half)


def rel(a, b):
    """Relative l2 distance of two coefficient arrays."""
    a, b = np.asarray(a), np.asarray(b)
    nb = np.linalg.norm(b)
    return np.linalg.norm(a - b) / nb if nb else np.linalg.norm(a)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            for key, val in getattr(rep, "user_properties", ()):
                if key == "criterion" and getattr(rep, "when", "call") == "call":
                    lines.append(val)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
