import numpy as np
import pytest

from xbicorr import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per available kernel implementation."""
    impl = kernels.get_backend(request.param)
    monkeypatch.setattr(kernels, "bds_counts", impl.bds_counts)
    monkeypatch.setattr(kernels, "window_lag_stats", impl.window_lag_stats)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _record(number, ok, detail):
        lines.append((number, f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"))
        assert ok, detail

    return _record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
