import pytest

from qdesign import km_search as K
from qdesign.gfq import field_make
from qdesign.params import ParameterSet


@pytest.fixture(scope="session")
def gf2():
    return field_make(2)


@pytest.fixture(scope="session")
def design_733():
    out = K.search_design(ParameterSet.parse("2-(7,3,3)_2"))
    assert out.designs, out.attempts
    return out.designs[0]


@pytest.fixture(scope="session")
def parallelism():
    ls = K.find_large_set(ParameterSet(1, 4, 2, 1, 2), 7, "trivial")
    assert ls is not None
    return ls


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    """Records one outcome line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        terminalreporter.write_line(log[n])
