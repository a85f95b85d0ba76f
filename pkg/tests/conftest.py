import pytest

from missingmass.lab import make_distribution

# small instances for exact enumeration: k <= 4
SMALL_ZOO = {
    "uniform1": ("uniform", {"k": 1}),
    "uniform2": ("uniform", {"k": 2}),
    "uniform3": ("uniform", {"k": 3}),
    "uniform4": ("uniform", {"k": 4}),
    "zipf4": ("zipf", {"k": 4, "alpha": 1.0}),
    "zipf3_steep": ("zipf", {"k": 3, "alpha": 2.5}),
    "geom4": ("truncated-geometric", {"k": 4, "rho": 0.5}),
    "skewed2": ("explicit", {"atoms": [0.9, 0.1]}),
    "skewed3": ("explicit", {"atoms": [0.7, 0.2, 0.1]}),
    "with_zero": ("explicit", {"atoms": [0.5, 0.0, 0.5]}),
}

# larger instances for Monte Carlo
MC_ZOO = {
    "uniform20": ("uniform", {"k": 20}),
    "zipf50": ("zipf", {"k": 50, "alpha": 1.1}),
    "geom30": ("truncated-geometric", {"k": 30, "rho": 0.8}),
    "skewed3": ("explicit", {"atoms": [0.7, 0.2, 0.1]}),
}


def build(entry):
    kind, params = entry
    return make_distribution(kind, **params)


@pytest.fixture(params=sorted(SMALL_ZOO))
def small_dist(request):
    return build(SMALL_ZOO[request.param])


@pytest.fixture(params=sorted(MC_ZOO))
def mc_dist(request):
    return build(MC_ZOO[request.param])


# one PASS/FAIL line per acceptance criterion, printed after the run
_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].removeprefix("test_").split("[")[0]
    if report.failed or report.when == "call":
        failed = report.failed or _CRITERIA.get(name) == "FAIL"
        _CRITERIA[name] = "FAIL" if failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
