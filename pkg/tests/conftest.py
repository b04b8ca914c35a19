import pytest

from hsforge.algebra import make_monomial_quotient
from hsforge.fields import FieldSpec


@pytest.fixture(scope="session")
def f5_33():
    return make_monomial_quotient(FieldSpec.prime(5), (3, 3))


@pytest.fixture(scope="session")
def f3_33():
    return make_monomial_quotient(FieldSpec.prime(3), (3, 3))


@pytest.fixture(scope="session")
def f2_22():
    return make_monomial_quotient(FieldSpec.prime(2), (2, 2))


@pytest.fixture(scope="session")
def f2_222():
    return make_monomial_quotient(FieldSpec.prime(2), (2, 2, 2))


@pytest.fixture(scope="session")
def q_32():
    return make_monomial_quotient(FieldSpec.rationals(), (3, 2))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
