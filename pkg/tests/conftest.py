import numpy as np
import pytest

from tfpkit.synthetic import EconomySpec, generate_economy


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def noise_free_economy():
    """Noise-free economy with constant 3% TFP growth (exact under a trend fit)."""
    return generate_economy(EconomySpec(seed=7, sigma=0.0, rho=0.0,
                                        capital_growth_sd=6.0, labor_growth_sd=4.0))


@pytest.fixture
def static_economy():
    """Noise-free economy with no TFP growth: exact under the plain restricted fit."""
    return generate_economy(EconomySpec(seed=11, sigma=0.0, rho=0.0, tfp_growth=0.0,
                                        capital_growth_sd=6.0, labor_growth_sd=4.0))


# --- acceptance summary: one line per criterion ---------------------------------

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None or (report.when != "call" and not report.failed):
        return
    n, title = marks
    entry = _CRITERIA.setdefault(n, [title, True])
    entry[1] = entry[1] and not report.failed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}")
