"""Session-wide fixtures: one grid, one realized corpus, one cached context.

Everything heavy (field realization, box averages, norm values) funnels
through a single VerifyContext so repeated requests hit its caches instead
of recomputing.
"""

import pytest

from scalenorm.corpus import load_manifest
from scalenorm.verify import VerifyContext


@pytest.fixture(scope="session")
def ctx():
    return VerifyContext()


@pytest.fixture(scope="session")
def grid(ctx):
    return ctx.grid


@pytest.fixture(scope="session")
def entries():
    return {e.id: e for e in load_manifest()[1]}


@pytest.fixture(scope="session")
def fields(ctx):
    return ctx.field_map()


@pytest.fixture(scope="session")
def boundary(ctx):
    return dict(ctx.boundary())
