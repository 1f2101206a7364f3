import pytest
from hypothesis import strategies as st

from spgraph.profile import Profile

# worked examples
EX21 = Profile.from_rankings([(1, 2, 3, 4, 5), (1, 3, 4, 2, 5), (2, 5, 3, 4, 1), (3, 5, 4, 2, 1)])
EX21_OPTIMUM = frozenset({(1, 2), (1, 3), (2, 5), (3, 4), (3, 5)})
GAP_EDGES = Profile.from_rankings([(1, 2, 4, 3), (2, 3, 4, 1), (1, 3, 4, 2)])
GAP_DEGREE = Profile.from_rankings([(1, 2, 3)])
EX22 = Profile.from_rankings([(1, 4, 2, 3), (3, 4, 2, 1)])
STAR4 = Profile.from_rankings([(1, 2, 3, 4), (2, 1, 3, 4), (3, 1, 2, 4), (4, 1, 2, 3)])


@st.composite
def profiles(draw, min_m=1, max_m=6, max_n=5):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(1, max_n))
    perm = st.permutations(list(range(1, m + 1))).map(tuple)
    return Profile.from_rankings(draw(st.lists(perm, min_size=n, max_size=n)))


# --- acceptance report -------------------------------------------------------

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    label = _LABELS.get(report.nodeid)
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE[label] = verdict


_LABELS: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            _LABELS[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]:4}  {label}")


@pytest.fixture
def ex21():
    return EX21
