import pytest

from qdoctrine.builders import (
    powerset_doctrine,
    setoid_powerset_doctrine,
    subobject_doctrine,
    weak_subobject_doctrine,
)
from qdoctrine.category import FinSet
from qdoctrine.completion import quotient_completion


@pytest.fixture(scope="session")
def pow2():
    return powerset_doctrine(FinSet(2))


@pytest.fixture(scope="session")
def pow3():
    return powerset_doctrine(FinSet(3))


@pytest.fixture(scope="session")
def psi2():
    return weak_subobject_doctrine(FinSet(2))


@pytest.fixture(scope="session")
def sub2():
    return subobject_doctrine(FinSet(2))


@pytest.fixture(scope="session")
def setoids():
    return setoid_powerset_doctrine()


@pytest.fixture(scope="session")
def q_pow2(pow2):
    return quotient_completion(pow2)


@pytest.fixture(scope="session")
def q_psi2(psi2):
    return quotient_completion(psi2)
