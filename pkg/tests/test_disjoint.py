import io
import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ohamuhi.disjoint import (
    CommunityDefinition, MergeState, check_community_definition,
    detect_disjoint, flag_epsilon_cores, meets_definition, write_partition,
)
from ohamuhi.dss import SimilarityMap, dss_fixed_point, local_cosine
from ohamuhi.graph import from_edges, load_edge_list

from conftest import BRIDGES, clique, two_cliques_graph
from oracles import naive_hamuhi

WEAK, MOST_WEAK = CommunityDefinition.WEAK, CommunityDefinition.MOST_WEAK


def communities(p):
    return sorted((m.tolist() for m in p.members), key=lambda c: c[0])


def edges_of(g):
    return list(zip(g.edge_u.tolist(), g.edge_v.tolist()))


def sim_dict(sim):
    return {frozenset(e): s for e, s in sim.items()}


# -- community definitions ----------------------------------------------------

def test_definition_examples():
    assert meets_definition(6, [1], WEAK)
    assert meets_definition(6, [1], MOST_WEAK)
    assert not meets_definition(0, [1], WEAK)
    assert not meets_definition(0, [1], MOST_WEAK)
    assert meets_definition(3, [2, 2], MOST_WEAK)
    assert meets_definition(3, [2, 2], WEAK)
    assert meets_definition(0, [], WEAK) and meets_definition(0, [], MOST_WEAK)
    # per-neighbor comparison is weaker than the total one
    assert meets_definition(3, [2, 2, 2], MOST_WEAK)
    assert not meets_definition(3, [2, 2, 2], WEAK)


def test_definition_on_partition():
    g = from_edges(5, clique(range(4)) + [(3, 4)])
    state = MergeState(g, local_cosine(g), assignment=[0, 0, 0, 0, 1])
    p = state.to_partition()
    assert p.m_int == [6, 0]
    assert check_community_definition(p, 0, WEAK)
    assert check_community_definition(p, 0, MOST_WEAK)
    assert not check_community_definition(p, 1, WEAK)
    with pytest.raises(KeyError):
        check_community_definition(p, 2, WEAK)


def test_parse_definition():
    assert CommunityDefinition.parse("most_weak") is MOST_WEAK
    assert CommunityDefinition.parse("WEAK") is WEAK
    with pytest.raises(ValueError):
        CommunityDefinition.parse("strong")


# -- epsilon cores --------------------------------------------------------------

def core_state(sims, eps_phase="definition"):
    """Community {0,1} (one internal edge) adjacent to singletons 2.. with the
    given max similarities; it fails both definitions when it has two or
    more neighbors."""
    edges = [(0, 1)] + [(0, 2 + i) for i in range(len(sims))]
    g = from_edges(2 + len(sims), edges)
    sim = SimilarityMap(g, np.array([1.0, *sims]))
    assignment = [0, 0, *range(1, 1 + len(sims))]
    state = MergeState(g, sim, MOST_WEAK, assignment=assignment)
    state.phase = eps_phase
    return state


def test_core_flagged_on_equal_similarities():
    state = core_state([0.9, 0.9])
    assert flag_epsilon_cores(state, 0.0) == {0}
    assert 0 in state.frozen


def test_core_not_flagged_outside_window():
    assert flag_epsilon_cores(core_state([0.9, 0.5]), 0.1) == set()
    assert flag_epsilon_cores(core_state([0.9, 0.5]), 0.4) == {0}


def test_single_neighbor_never_flagged():
    state = core_state([0.9])
    state.m_int[0] = 0  # force it to be a candidate
    assert flag_epsilon_cores(state, 10.0) == set()


def test_negative_eps_rejected():
    with pytest.raises(ValueError):
        flag_epsilon_cores(core_state([0.9, 0.9]), -0.1)


def test_frozen_core_survives_detection(bridged):
    p = detect_disjoint(bridged, dss_fixed_point(bridged), eps=0.0)
    assert len(p.core_flags) == 1
    (core,) = p.core_flags
    assert p.members[core].tolist() == list(BRIDGES)
    assert not check_community_definition(p, core, WEAK)
    assert not check_community_definition(p, core, MOST_WEAK)


# -- detection examples -----------------------------------------------------------

@pytest.mark.parametrize("cd", [WEAK, MOST_WEAK])
@pytest.mark.parametrize("measure", [dss_fixed_point, local_cosine])
def test_two_cliques(cd, measure):
    g = two_cliques_graph()
    p = detect_disjoint(g, measure(g), cd=cd)
    assert communities(p) == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]
    assert p.assignment.tolist() == [0] * 5 + [1] * 5


def test_edgeless_graph():
    g = from_edges(4, [])
    p = detect_disjoint(g, dss_fixed_point(g), K=2)
    assert communities(p) == [[0], [1], [2], [3]]


@pytest.mark.parametrize("k", [3, 4, 6, 9])
@pytest.mark.parametrize("cd", [WEAK, MOST_WEAK])
def test_single_clique(k, cd):
    g = from_edges(k, clique(range(k)))
    assert communities(detect_disjoint(g, dss_fixed_point(g), cd=cd)) == [list(range(k))]


def test_size_rule_absorbs_pendant():
    # a triangle with a pendant chain; K=4 forces the chain in
    g = from_edges(5, clique(range(3)) + [(2, 3), (3, 4)])
    p = detect_disjoint(g, dss_fixed_point(g), K=5)
    assert communities(p) == [[0, 1, 2, 3, 4]]


def test_bad_inputs():
    g = two_cliques_graph()
    with pytest.raises(ValueError):
        detect_disjoint(g, dss_fixed_point(g), K=0)
    other = from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        detect_disjoint(g, dss_fixed_point(other))


def test_write_partition_sorted_by_label():
    g = load_edge_list(io.StringIO(
        "".join(f"n{u} n{v}\n" for u, v in edges_of(two_cliques_graph())[::-1])))
    p = detect_disjoint(g, dss_fixed_point(g))
    buf = io.StringIO()
    write_partition(p, buf)
    lines = buf.getvalue().splitlines()
    assert [l.split()[0] for l in lines] == [f"n{i}" for i in range(10)]
    assert len({l.split()[1] for l in lines}) == 2


# -- oracle equivalence -------------------------------------------------------------

def check_against_oracle(g, sim, cd, K, eps):
    p = detect_disjoint(g, sim, cd=cd, K=K, eps=eps)
    comms, frozen = naive_hamuhi(g.node_count, edges_of(g), sim_dict(sim),
                                 cd.value, K, eps)
    assert communities(p) == comms
    assert sorted(p.members[c].tolist() for c in p.core_flags) == sorted(frozen)
    check_partition_invariants(g, sim, p, cd, K)
    return p


def check_partition_invariants(g, sim, p, cd, K):
    n = g.node_count
    assert sorted(itertools.chain.from_iterable(m.tolist() for m in p.members)) == list(range(n))
    assert [m[0] for m in p.members] == sorted(m[0] for m in p.members)
    for c, m in enumerate(p.members):
        assert np.all(p.assignment[m] == c)
    assert sum(p.m_int) + sum(k for cr in p.cross for k, _ in cr.values()) // 2 == g.edge_count
    # brute-force cross statistics
    brute = [{} for _ in p.members]
    for (u, v), s in sim.items():
        a, b = int(p.assignment[u]), int(p.assignment[v])
        if a != b:
            for x, y in ((a, b), (b, a)):
                k, mx = brute[x].get(y, (0, 0.0))
                brute[x][y] = (k + 1, max(mx, s))
    assert brute == p.cross
    for c in range(p.community_count):
        if c in p.core_flags:
            continue
        unfrozen = [h for h in p.cross[c] if h not in p.core_flags]
        if unfrozen:
            assert check_community_definition(p, c, cd)
            assert len(p.members[c]) >= K


ATLAS = [nx.convert_node_labels_to_integers(h) for h in nx.graph_atlas_g()[1:]
         if nx.is_connected(h)]


@pytest.mark.parametrize("cd", [WEAK, MOST_WEAK])
@pytest.mark.parametrize("eps", [None, 0.0, 0.05])
def test_atlas_against_oracle(cd, eps):
    for h in ATLAS:
        g = from_edges(h.number_of_nodes(), list(h.edges()))
        check_against_oracle(g, dss_fixed_point(g), cd, 2, eps)


@pytest.mark.parametrize("seed", range(40))
def test_random_graphs_against_oracle(seed):
    rnd = random.Random(seed)
    n = 8
    edges = [e for e in itertools.combinations(range(n), 2) if rnd.random() < 0.45]
    g = from_edges(n, edges)
    for measure in (dss_fixed_point, local_cosine):
        sim = measure(g)
        for cd, K, eps in [(MOST_WEAK, 2, None), (WEAK, 3, None), (MOST_WEAK, 2, 0.0),
                           (WEAK, 2, 0.1), (MOST_WEAK, 4, 0.02)]:
            check_against_oracle(g, sim, cd, K, eps)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 10).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=30),
    st.lists(st.integers(1, 4), min_size=30, max_size=30))))
def test_integer_similarities_force_ties(data):
    # few distinct values make multi-way ties common
    n, edges, vals = data
    g = from_edges(n, edges)
    sim = SimilarityMap(g, np.array(vals[:g.edge_count], dtype=float))
    check_against_oracle(g, sim, MOST_WEAK, 2, 0.0)
    check_against_oracle(g, sim, WEAK, 3, None)


# -- invariance ------------------------------------------------------------------------

@pytest.mark.parametrize("eps", [None, 0.0])
@pytest.mark.parametrize("seed", range(5))
def test_scale_invariance(seed, eps):
    g = nx.gnp_random_graph(60, 0.1, seed=seed)
    g = from_edges(60, list(g.edges()))
    sim = dss_fixed_point(g)
    a = detect_disjoint(g, sim, eps=eps)
    b = detect_disjoint(g, sim.scaled(7.3), eps=eps)
    assert a.same_as(b)


def test_deterministic():
    g = two_cliques_graph(7)
    sim = dss_fixed_point(g)
    assert detect_disjoint(g, sim).same_as(detect_disjoint(g, sim))
