import pytest

from sheafradon import acceptance


@pytest.fixture(scope="session")
def sheaves():
    return acceptance.acceptance_sheaves()
