import pytest

from nnru.params import get_preset
from nnru.scheme import keygen
from nnru.streams import derive_rng


@pytest.fixture(scope="session")
def toy():
    return get_preset("toy")


@pytest.fixture(scope="session")
def toy_keys(toy):
    return keygen(toy, derive_rng(1234, "fixture"))


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_RESULTS

    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
