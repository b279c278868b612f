import os

import pytest

from cubemorse.raag import DefiningGraph

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def z3z() -> DefiningGraph:
    # Z^3 * Z: a,b,c pairwise commuting, d free
    return DefiningGraph.from_json(os.path.join(DATA, "z3z.json"))


@pytest.fixture(scope="session")
def ck() -> DefiningGraph:
    # path graph a-b-c-d
    return DefiningGraph.from_json(os.path.join(DATA, "ck.json"))
