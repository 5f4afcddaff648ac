import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_antisymmetric(rng, n, complex_=True):
    a = rng.normal(size=(n, n))
    if complex_:
        a = a + 1j * rng.normal(size=(n, n))
    return a - a.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, n=8):
    from chiralchain.core import ModelParams

    return ModelParams(
        gamma=float(rng.uniform(0.0, 1.0)),
        d=float(rng.uniform(0.0, 2.5)),
        h=float(rng.uniform(-1.5, 1.5)),
        alpha=float(rng.uniform(0.3, 3.0)),
        n=n,
    )


def nondegenerate_systems(seed, count, n=8):
    """``count`` random (params, DenseSpinSystem) pairs whose ground state is unique."""
    from chiralchain.oracle import ed_build

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        params = random_params(rng, n)
        system = ed_build(params)
        if not system.degenerate:
            out.append((params, system))
    return out


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line, echo it to the terminal, then assert it."""

    def _report(number: int, title: str, ok: bool, details: str, seconds: float, budget: float):
        in_time = seconds < budget
        passed = bool(ok) and in_time
        line = (
            f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'} {title}: {details}"
            f" [{seconds:.1f} s / budget {budget:.0f} s{'' if in_time else ', over budget'}]"
        )
        request.config.stash.setdefault(ACCEPTANCE_KEY, []).append(line)
        reporter = request.config.pluginmanager.get_plugin("terminalreporter")
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        assert passed, line

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
