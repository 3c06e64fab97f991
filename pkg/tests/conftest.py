import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def masses(draw, min_size=1, max_size=50, allow_zeros=True):
    """Probability vector; zeros are common so support edge cases get hit."""
    size = draw(st.integers(min_size, max_size))
    lo = 0.0 if allow_zeros else 1e-6
    raw = draw(st.lists(st.floats(lo, 1.0, allow_nan=False), min_size=size, max_size=size))
    raw = np.array(raw)
    if raw.sum() == 0:
        raw[0] = 1.0
    return raw / raw.sum()


@st.composite
def mass_pairs(draw, max_size=50):
    """Two probability vectors of equal length (shorter one zero-padded)."""
    a = draw(masses(max_size=max_size))
    b = draw(masses(max_size=max_size))
    k = max(a.size, b.size)
    return np.pad(a, (0, k - a.size)), np.pad(b, (0, k - b.size))


def random_pmf(rng, max_size=50):
    """Dirichlet draw with a random concentration and random support size."""
    k = int(rng.integers(1, max_size + 1))
    conc = 10.0 ** rng.uniform(-2, 1)
    x = rng.dirichlet(np.full(k, conc))
    # dirichlet with tiny concentration can underflow to all zeros
    if not x.sum() > 0:
        x = np.zeros(k)
        x[0] = 1.0
    return x / x.sum()


@pytest.fixture
def record_criterion(request):
    """Print a PASS/FAIL line now and repeat it in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
