import pytest

from fanobound.catalog import load_catalog, load_facts


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def facts():
    return load_facts()
