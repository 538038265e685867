"""
Repository-level pytest hooks: puts the top-level packages on sys.path
(rootdir conftest) and gates long acceptance runs behind --runslow.
"""
import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-size acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size acceptance run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
