"""Shared pytest options and fixtures."""

import pytest


def pytest_addoption(parser):
    """Register the oracle options."""
    parser.addoption(
        "--oracle-budget",
        action="store",
        type=int,
        default=100000,
        help="Monte Carlo samples per oracle comparison",
    )
    parser.addoption(
        "--run-oracle",
        action="store_true",
        default=False,
        help="Run the long oracle sweeps",
    )


def pytest_collection_modifyitems(config, items):
    """Skip oracle-marked tests unless --run-oracle is given."""
    if config.getoption("--run-oracle"):
        return
    skip_oracle = pytest.mark.skip(reason="needs --run-oracle")
    for item in items:
        # Markers only; the tests/oracle directory name is a keyword too.
        if item.get_closest_marker("oracle") is not None:
            item.add_marker(skip_oracle)


@pytest.fixture
def oracle_budget(request):
    """Monte Carlo sample budget for oracle comparisons."""
    return request.config.getoption("--oracle-budget")
