import pytest

from unical import bundled_registry, load_registry

LITRE_TEXT = """\
[units]
L L^3

[rules]
L 1 dm^3
"""


@pytest.fixture(scope="session")
def si_pair():
    return load_registry(bundled_registry("si"))


@pytest.fixture(scope="session")
def si_system(si_pair):
    return si_pair[0]


@pytest.fixture(scope="session")
def si_rules(si_pair):
    return si_pair[1]


@pytest.fixture(scope="session")
def siuk_pair():
    return load_registry(bundled_registry("si"), bundled_registry("uk"))


@pytest.fixture(scope="session")
def litre_pair():
    return load_registry(bundled_registry("si"), LITRE_TEXT)
