import sys

import numpy as np
import pytest
from hypothesis import settings

from hausfock import TaylorPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_poly(rng, degree, radius=1.0):
    """Coefficients uniform in the disc of the given radius."""
    r = radius * np.sqrt(rng.uniform(size=degree + 1))
    th = rng.uniform(0, 2 * np.pi, size=degree + 1)
    return TaylorPoly(r * np.exp(1j * th))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
