import pytest

from sadic import families
from sadic.language import build_language


@pytest.fixture(scope="session")
def fib():
    return families.fibonacci()


@pytest.fixture(scope="session")
def trib():
    return families.tribonacci()


@pytest.fixture(scope="session")
def fib_lang(fib):
    # long enough for the complexity sweep and dendricity at 100
    return build_language(fib, max_len=102)


@pytest.fixture(scope="session")
def trib_lang(trib):
    return build_language(trib, max_len=102)
