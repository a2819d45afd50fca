import pytest

from infogate.gates import default_library
from infogate.metrics import InputDistribution
from infogate.truthtable import TruthTable


@pytest.fixture(scope="session")
def lib():
    return default_library()


@pytest.fixture(scope="session")
def uniform():
    return InputDistribution.uniform()


@pytest.fixture(scope="session")
def and2():
    return TruthTable.from_bitstrings(("x1", "x2"), ("f1",), ("0001",))


@pytest.fixture(scope="session")
def xor2():
    return TruthTable.from_bitstrings(("x1", "x2"), ("f1",), ("0110",))


@pytest.fixture(scope="session")
def not1():
    return TruthTable.from_bitstrings(("x1",), ("f1",), ("10",))
