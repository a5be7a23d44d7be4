import itertools

import pytest

from ohamuhi.graph import from_edges

ACCEPTANCE_LINES: list[str] = []


def clique(nodes):
    return list(itertools.combinations(nodes, 2))


def two_cliques_graph(k=5):
    """Two k-cliques joined by a single edge."""
    a = list(range(k))
    b = list(range(k, 2 * k))
    return from_edges(2 * k, clique(a) + clique(b) + [(k - 1, k)])


BRIDGES = (3, 4)
LEFT = (0, 1, 2, 8)
RIGHT = (5, 6, 7, 9)


def bridge_fixture():
    """Two 4-cliques plus two adjacent bridge nodes, each linked to three
    nodes of both cliques. Mirror symmetric: swapping the cliques fixes the
    bridges."""
    edges = clique(LEFT) + clique(RIGHT) + [BRIDGES]
    for b in BRIDGES:
        for x in (0, 1, 2, 5, 6, 7):
            edges.append((b, x))
    return from_edges(10, edges)


@pytest.fixture
def two_cliques():
    return two_cliques_graph()


@pytest.fixture
def bridged():
    return bridge_fixture()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        n, text = marker.args
        status = "PASS" if report.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {n:>2} {status}  {text}")
        print(f"\ncriterion {n} {status}: {text}")
