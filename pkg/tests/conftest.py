import pytest

from diperfect.alis import is_alis
from diperfect.enumeration import hereditary_classes


@pytest.fixture(scope="session")
def alis_classes():
    """Isomorphism classes of ALIS digraphs up to six vertices."""
    return hereditary_classes(6, is_alis)


_LOG = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Lines collected here are printed once at the end of the run."""
    return request.config.stash.setdefault(_LOG, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
