"""Test configuration and fixtures for lie2vanest tests."""

pytest_plugins = ["pytest_asyncio"]

import numpy as np
import pytest

from lie2vanest.config import ExampleName, RunConfig, SuiteName
from lie2vanest.group2 import (
    MatrixCrossedModule,
    coadjoint_crossed_module,
    tangent_crossed_module,
)
from lie2vanest.groups import heis3, so3, su2
from lie2vanest.lie2alg import to_lie2
from lie2vanest.numcore import constant_like
from lie2vanest.simplicial import StrictLie2Group


@pytest.fixture
def rng():
    """Seeded generator; every test draws its own samples."""
    return np.random.default_rng(20240611)


@pytest.fixture
def so3_group():
    """SO(3) with the standard basis of so(3)."""
    return so3()


@pytest.fixture
def tangent_so3(so3_group):
    """The tangent crossed module (G, G, id, Ad) over SO(3)."""
    return tangent_crossed_module(so3_group)


@pytest.fixture
def coadjoint_so3(so3_group):
    """The coadjoint crossed module (G, g*, 1, Ad*) over SO(3)."""
    return coadjoint_crossed_module(so3_group)


@pytest.fixture
def tangent_alg(tangent_so3):
    """The Lie 2-algebra of the tangent crossed module, computed exactly."""
    return to_lie2(tangent_so3.exact_algebra())


@pytest.fixture
def coadjoint_alg(coadjoint_so3):
    """The Lie 2-algebra of the coadjoint crossed module, computed exactly."""
    return to_lie2(coadjoint_so3.exact_algebra())


@pytest.fixture
def tangent_group(tangent_so3):
    """The strict Lie 2-group of the tangent crossed module, capped at level 4."""
    return StrictLie2Group(tangent_so3, cap=4)


@pytest.fixture
def coadjoint_group(coadjoint_so3):
    """The strict Lie 2-group of the coadjoint crossed module."""
    return StrictLie2Group(coadjoint_so3)


@pytest.fixture
def corrupted_so3(so3_group):
    """SO(3) acting trivially on itself: the Peiffer and equivariance identities fail."""
    return MatrixCrossedModule(
        so3_group,
        so3_group,
        lambda h: h,
        lambda g: constant_like(g, np.eye(3)),
        name="corrupted/so3",
    )


@pytest.fixture(params=[so3, su2, heis3], ids=["so3", "su2", "heis3"])
def any_group(request):
    """Parametrized fixture over the bundled non-abelian groups."""
    return request.param()


@pytest.fixture
def quick_config():
    """A small run over the cheap suites."""
    return RunConfig(
        example=ExampleName.NONE,
        crossed_module="tangent",
        level_cap=3,
        samples=1,
        suites=[SuiteName.CROSSED_MODULE, SuiteName.SIMPLICIAL, SuiteName.WEIL],
    )
