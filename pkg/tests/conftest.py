import functools

import pytest

from sbim_specialise import build_realisation

RANK_LE_3 = ["A1", "A1xA1", "A2", "B2", "G2", "A3", "B3"]


@functools.lru_cache(maxsize=None)
def shared_realisation(name: str):
    # realisations memoise reflections, orbits and modules; share them across tests
    return build_realisation(name)


@pytest.fixture
def real():
    return shared_realisation
