"""Shared fixtures.

Full reference runs are expensive (4e6 steps each), so they are computed
once per session and shared across test modules.
"""

import warnings

import pytest

import chemotax as ct


@pytest.fixture(scope="session")
def preset_run():
    """Memoized full run of a named preset: returns (scenario, trajectory)."""
    cache = {}

    def _get(name):
        if name not in cache:
            scn = ct.preset(name)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ct.CompatibilityWarning)
                cache[name] = (scn, scn.run())
        return cache[name]

    return _get


@pytest.fixture(scope="session")
def order_study():
    """Memoized manufactured-solution convergence studies."""
    cache = {}

    def _get(kind, mode):
        key = (kind, mode)
        if key not in cache:
            if kind == "spatial":
                cache[key] = ct.spatial_order_study(mode)
            else:
                cache[key] = ct.temporal_order_study(mode)
        return cache[key]

    return _get


@pytest.fixture()
def quiet_compat():
    """Silence the expected initial-data compatibility warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ct.CompatibilityWarning)
        yield
