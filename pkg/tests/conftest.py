import pytest

from jrselect import bridge_conflict_instance, mini_bridge_instance


@pytest.fixture
def bridge12():
    return bridge_conflict_instance()


@pytest.fixture
def bridge6():
    return mini_bridge_instance()
