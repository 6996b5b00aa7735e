from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from turanforge import constructions as cons
from turanforge.certificate import Verdict
from turanforge.hypercore import (
    Graph,
    Hypergraph3,
    contains_clique,
    edge_density,
    induced,
    is_clique,
    link_graph,
)


def hypergraphs(max_n=9):
    @st.composite
    def build(draw):
        n = draw(st.integers(3, max_n))
        triples = list(combinations(range(n), 3))
        keep = draw(st.lists(st.booleans(), min_size=len(triples), max_size=len(triples)))
        return Hypergraph3(n, [t for t, k in zip(triples, keep) if k])
    return build()


def test_edges_are_sorted_and_deduplicated():
    H = Hypergraph3(4, [(2, 1, 0), (0, 1, 2), (3, 1, 2)])
    assert H.edges.tolist() == [[0, 1, 2], [1, 2, 3]]
    assert H.m == 2


@pytest.mark.parametrize("bad", [[(0, 1, 5)], [(0, 0, 1)], [(-1, 1, 2)]])
def test_bad_edges_rejected(bad):
    with pytest.raises(ValueError):
        Hypergraph3(5, bad)


def test_immutable():
    H = Hypergraph3(4, [(0, 1, 2)])
    with pytest.raises(ValueError):
        H.edges[0, 0] = 3
    with pytest.raises(ValueError):
        H.adj[0, 1, 0] = 0


@settings(max_examples=60, deadline=None)
@given(hypergraphs())
def test_pair_adjacency_symmetric_and_counts(H):
    T = H.tensor
    n = H.n
    for x, y, z in combinations(range(n), 3):
        want = (x, y, z) in H.edge_set()
        assert T[x, y, z] == T[y, z, x] == T[z, x, y] == T[y, x, z] == want
        assert H.has_edge(z, x, y) == want
    total = sum(len(H.pair_neighbours(x, y)) for x, y in combinations(range(n), 2))
    assert total == 3 * H.m


@settings(max_examples=60, deadline=None)
@given(hypergraphs(), st.integers(3, 6))
def test_clique_matches_naive(H, ell):
    if ell > H.n:
        return
    c = contains_clique(H, ell)
    naive = oracles.has_clique(H.n, H.edges.tolist(), ell)
    if naive is None:
        assert c.verdict == Verdict.REFUTED
    else:
        assert c.verdict == Verdict.CERTIFIED
        assert c.witness == naive  # lexicographically first


def test_clique_examples():
    assert contains_clique(Hypergraph3.complete(5), 5).witness == (0, 1, 2, 3, 4)
    assert contains_clique(Hypergraph3(3, [(0, 1, 2)]), 3).witness == (0, 1, 2)
    with pytest.raises(ValueError):
        contains_clique(Hypergraph3(4), 2)
    with pytest.raises(ValueError):
        contains_clique(Hypergraph3(4), 5)


def test_clique_budget():
    c = contains_clique(Hypergraph3.complete(12), 12, budget=3)
    assert c.verdict == Verdict.PASSED_BUDGET


def test_clique_oracle_at_n12():
    for seed in range(10):
        H = cons.psi_hypergraph(cons.random_pairmap(12, 3, seed))
        for ell in (4, 5):
            naive = oracles.has_clique(12, H.edges.tolist(), ell)
            c = contains_clique(H, ell)
            assert (c.witness if c.found else None) == naive


def test_link_graph_examples():
    assert link_graph(Hypergraph3(5), 2).m == 0
    G = link_graph(Hypergraph3(3, [(0, 1, 2)]), 0)
    assert G.edges() == [(1, 2)]
    with pytest.raises(ValueError):
        link_graph(Hypergraph3(3), 3)


@settings(max_examples=40, deadline=None)
@given(hypergraphs())
def test_link_sum_is_three_times_edges(H):
    links = [link_graph(H, x) for x in range(H.n)]
    assert sum(G.m for G in links) == 3 * H.m
    for x, G in enumerate(links):
        assert not G.matrix[x].any()


def test_psi_link_density_near_third():
    H = cons.psi_hypergraph(cons.random_pairmap(60, 3, 11))
    for x in (0, 17, 59):
        dens = link_graph(H, x).m / (59 * 58 / 2)
        assert abs(dens - 1 / 3) < 0.1


def test_edge_density():
    assert edge_density(Hypergraph3(5)) == 0
    assert edge_density(Hypergraph3.complete(5)) == 1
    with pytest.raises(ValueError):
        edge_density(Hypergraph3(2))


def test_psi_mean_density_is_exactly_a_third():
    total = sum(cons.psi_hypergraph(pm).m for pm in cons.all_pairmaps(5, 3))
    assert Fraction(total, 3 ** 10 * 10) == Fraction(1, 3)


def test_induced():
    H = induced(Hypergraph3.complete(6), [5, 1, 3, 0])
    assert H == Hypergraph3.complete(4)
    pm = cons.random_pairmap(7, 3, 3)
    S = [6, 2, 4, 0, 5]
    assert induced(cons.psi_hypergraph(pm), S) == cons.psi_hypergraph(pm.restrict(S))
    with pytest.raises(ValueError):
        induced(H, [0, 0, 1])


def test_is_clique():
    H = Hypergraph3.complete(5)
    assert is_clique(H, [0, 2, 4])
    assert not is_clique(Hypergraph3(5, [(0, 1, 2)]), [0, 1, 2, 3])


def test_graph_basics():
    G = Graph.from_edges(4, [(0, 1), (2, 3), (1, 2)])
    assert G.m == 3
    assert G.edges_inside([0, 1, 2]) == 2
    with pytest.raises(ValueError):
        Graph(np.ones((3, 3), dtype=bool))
