import pytest

_PROPERTY_RUNS: dict[str, tuple[str, float]] = {}


def pytest_collection_modifyitems(config, items):
    # acceptance checks read the property-suite timings, so they run last
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if "test_properties.py" in report.nodeid and report.when == "call":
        _PROPERTY_RUNS[report.nodeid] = (report.outcome, report.duration)


@pytest.fixture
def property_runs():
    """Outcome and duration of every property test already run in this session."""
    return dict(_PROPERTY_RUNS)
