import pytest

from contactgb.identities import VariableRegistry


@pytest.fixture
def registry():
    return VariableRegistry()


@pytest.fixture
def classical_order(registry):
    return registry.lex_order()
