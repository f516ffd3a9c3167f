from __future__ import annotations

import pytest
from hypothesis import settings

import gsurv
from helpers import (
    EX_MAIN_MU,
    EX_MAIN_NU,
    EXAMPLE_MEASURE,
    LM_MEASURE,
    SC_MEASURE,
    TABLE1,
    measure3,
    vec,
)

settings.register_profile("suite", derandomize=True, max_examples=60)
settings.load_profile("suite")


@pytest.fixture
def table1():
    return measure3(TABLE1)


@pytest.fixture
def sc_measure():
    return measure3(SC_MEASURE)


@pytest.fixture
def example_measure():
    return measure3(EXAMPLE_MEASURE)


@pytest.fixture
def ex_main_mu():
    return measure3(EX_MAIN_MU)


@pytest.fixture
def ex_main_nu():
    return measure3(EX_MAIN_NU)


@pytest.fixture
def lm_measure():
    return measure3(LM_MEASURE)


@pytest.fixture
def x234():
    return vec(2, 3, 4)


@pytest.fixture
def sum_powerset():
    return gsurv.Fca.powerset(gsurv.SumOperator(), 3)


@pytest.fixture
def max_powerset():
    return gsurv.Fca.powerset(gsurv.MaxOperator(), 3)
