"""Shared pytest fixtures: ground fields and the shipped dg-categories."""

import pytest

from dgcat_workbench import Field, q2, dual_numbers, dg_interval, q2_adjunctions, unit_category


@pytest.fixture
def qq():
    return Field(0)


@pytest.fixture
def f2():
    return Field(2)


@pytest.fixture(params=[0, 2], ids=["Q", "F2"])
def fld(request):
    return Field(request.param)


@pytest.fixture
def k(fld):
    return unit_category(fld)


@pytest.fixture
def quiver(fld):
    return q2(fld)


@pytest.fixture
def dual(fld):
    return dual_numbers(fld)


@pytest.fixture
def interval(fld):
    return dg_interval(fld)


@pytest.fixture
def adj(fld):
    return q2_adjunctions(fld)
