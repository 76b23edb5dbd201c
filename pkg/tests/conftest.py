import pytest

from qprod import FormSpec, build, eisenstein, extract
from qprod.forms import newform


LEVEL2_SPEC = FormSpec(kind="eta_quotient", level=2, weight=8, eta_exponents={1: 8, 2: 8})
LEVEL11_SPEC = FormSpec(kind="eta_quotient", level=11, weight=2, eta_exponents={1: 2, 11: 2})


@pytest.fixture(scope="session")
def e4_exponents():
    return extract(eisenstein(4, 61), 0, source="E4")


@pytest.fixture(scope="session")
def e6_exponents():
    return extract(eisenstein(6, 61), 0, source="E6")


@pytest.fixture(scope="session")
def delta_exponents_200():
    return extract(build(FormSpec(kind="delta"), 201), 1, source="delta")


@pytest.fixture(scope="session")
def level11_exponents_200():
    return extract(newform(11, 201), 1, source="level-11 eta quotient")
