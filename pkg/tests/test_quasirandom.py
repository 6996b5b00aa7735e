from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from turanforge import constructions as cons
from turanforge.certificate import Method, Verdict
from turanforge.errors import CapabilityError
from turanforge.hypercore import Graph, Hypergraph3, link_graph
from turanforge.quasirandom import (
    PairSet,
    certify_link_quasirandom,
    e_ee,
    ee_density_adversary,
    ee_violation,
    k_ee,
    spectral_radius_shifted,
    subset_deviation,
)


def random_h(n, p, seed):
    gen = np.random.default_rng(seed)
    return Hypergraph3(n, [t for t in combinations(range(n), 3) if gen.random() < p])


# -- subset deviation -----------------------------------------------------------------


def test_subset_deviation_examples():
    G = Graph.from_edges(6, combinations(range(6), 2))
    assert subset_deviation(G, Fraction(1, 3), []) == 0
    assert subset_deviation(G, 1, range(6)) == 6
    assert subset_deviation(G, Fraction(1, 2), [0, 1]) == 0  # 2*1 - 4/2
    with pytest.raises(ValueError):
        subset_deviation(G, 1, [6])


def test_pairset_basics():
    P = PairSet.product(4, [0, 1], [1, 3])
    assert len(P) == 4 and (0, 3) in P and (3, 0) not in P
    assert P.pairs() == [(0, 1), (0, 3), (1, 1), (1, 3)]
    assert len(P.off_diagonal()) == 3
    assert PairSet.from_pairs(4, P.pairs()) == P
    assert len(PairSet.full(3)) == 9 and len(PairSet.empty(3)) == 0


# -- link certification -----------------------------------------------------------------


def test_exhaustive_complete_certified():
    certs = certify_link_quasirandom(Hypergraph3.complete(8), 1, Fraction(1, 2), "EXHAUSTIVE")
    assert all(c.verdict == Verdict.CERTIFIED for c in certs.values())


def test_empty_refuted_with_whole_vertex_set():
    H = Hypergraph3(30)
    for mode in ("SAMPLING",):
        certs = certify_link_quasirandom(H, Fraction(1, 3), Fraction(1, 10), mode, samples=50)
        for c in certs.values():
            assert c.verdict == Verdict.REFUTED
            assert c.witness == list(range(30))
            assert c.deviation == Fraction(1, 3) * 900 / 2
    small = certify_link_quasirandom(Hypergraph3(12), Fraction(1, 3), Fraction(1, 10), "EXHAUSTIVE")
    assert all(c.witness == list(range(12)) for c in small.values())


def test_exhaustive_capability():
    with pytest.raises(CapabilityError):
        certify_link_quasirandom(Hypergraph3(21), Fraction(1, 3), Fraction(1, 10), "EXHAUSTIVE")
    with pytest.raises(ValueError):
        certify_link_quasirandom(Hypergraph3(5), Fraction(1, 3), Fraction(1, 10), "LOCAL_SEARCH")


@pytest.mark.parametrize("seed", range(4))
def test_exhaustive_matches_naive(seed):
    n = 9
    H = random_h(n, 0.4, seed)
    d = Fraction(1, 3)
    certs = certify_link_quasirandom(H, d, Fraction(1, 20), "EXHAUSTIVE")
    for x, c in certs.items():
        want = oracles.max_link_deviation(n, H.edges.tolist(), x, d)
        assert c.deviation == want / 2
        assert (c.verdict == Verdict.REFUTED) == (want > 2 * Fraction(1, 20) * n * n)
        if c.witness is not None:
            assert subset_deviation(link_graph(H, x), d, c.witness) == want


def test_boundary_is_exact():
    H = Hypergraph3.complete(5)
    d = 1
    worst = max(oracles.max_link_deviation(5, H.edges.tolist(), 0, d), 0)
    delta = Fraction(worst, 2 * 25)
    at = certify_link_quasirandom(H, d, delta, "EXHAUSTIVE", vertices=[0])[0]
    below = certify_link_quasirandom(H, d, delta - Fraction(1, 10 ** 9), "EXHAUSTIVE", vertices=[0])[0]
    assert at.verdict == Verdict.CERTIFIED
    assert below.verdict == Verdict.REFUTED


def test_spectral_sound_against_exhaustive():
    for seed in range(6):
        H = random_h(14, 0.5, seed)
        for delta in (Fraction(1, 4), Fraction(1, 2)):
            sp = certify_link_quasirandom(H, Fraction(1, 2), delta, "SPECTRAL")
            ex = certify_link_quasirandom(H, Fraction(1, 2), delta, "EXHAUSTIVE")
            for x in sp:
                assert sp[x].verdict != Verdict.REFUTED
                if sp[x].verdict == Verdict.CERTIFIED:
                    assert ex[x].verdict == Verdict.CERTIFIED
                    assert float(ex[x].deviation) <= sp[x].deviation + 1e-9


def test_spectral_radius():
    A = np.ones((4, 4), dtype=bool) & ~np.eye(4, dtype=bool)
    # J - I - dJ with d = 1 is -I
    assert spectral_radius_shifted(A, 1) == pytest.approx(1.0)


def test_sampling_never_certifies_and_is_seeded():
    H = cons.psi_hypergraph(cons.random_pairmap(40, 3, 0))
    a = certify_link_quasirandom(H, Fraction(1, 3), Fraction(1, 20), samples=300, seed=4, vertices=[0, 1])
    b = certify_link_quasirandom(H, Fraction(1, 3), Fraction(1, 20), samples=300, seed=4, vertices=[0, 1])
    for x in a:
        assert a[x].verdict == Verdict.PASSED_BUDGET
        assert a[x].method == Method.SAMPLING
        assert a[x].deviation == b[x].deviation


def test_sampling_refutes_planted_dense_block():
    n = 40
    edges = [t for t in combinations(range(n), 3) if 0 in t and max(t) < 20]
    H = Hypergraph3(n, edges)
    c = certify_link_quasirandom(H, Fraction(1, 3), Fraction(1, 20), samples=200, vertices=[0])[0]
    assert c.verdict == Verdict.REFUTED
    G = link_graph(H, 0)
    assert subset_deviation(G, Fraction(1, 3), c.witness) > 2 * Fraction(1, 20) * n * n


def test_psi_links_small_exhaustive_deviation_frozen():
    # frozen from the exact scan; the naive oracle agrees at vertex 0
    H = cons.psi_hypergraph(cons.random_pairmap(12, 3, 7))
    certs = certify_link_quasirandom(H, Fraction(1, 3), Fraction(1, 10), "EXHAUSTIVE")
    assert certs[0].deviation == oracles.max_link_deviation(12, H.edges.tolist(), 0, Fraction(1, 3)) / 2
    assert max(c.deviation for c in certs.values()) == PSI12_MAX_DEV


def _psi12_max():
    H = cons.psi_hypergraph(cons.random_pairmap(12, 3, 7))
    return max(oracles.max_link_deviation(12, H.edges.tolist(), x, Fraction(1, 3)) for x in range(12)) / 2


PSI12_MAX_DEV = Fraction(61, 6)


def test_psi12_frozen_value_matches_oracle():
    assert _psi12_max() == PSI12_MAX_DEV


# -- e_ee and k_ee -------------------------------------------------------------------------


def pairsets(n):
    return st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: np.array(bits, dtype=bool).reshape(n, n))


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 7).flatmap(lambda n: st.tuples(st.just(n), pairsets(n), pairsets(n),
                                                    st.integers(0, 2 ** 32 - 1))))
def test_e_ee_and_k_ee_match_naive(args):
    n, P, Q, seed = args
    H = random_h(n, 0.5, seed)
    edges = H.edges.tolist()
    assert e_ee(H, P, Q) == oracles.e_ee(n, edges, P.tolist(), Q.tolist())
    assert k_ee(P, Q) == oracles.k_ee(n, P.tolist(), Q.tolist())
    assert e_ee(H, P, Q) <= k_ee(P, Q)


def test_e_ee_examples():
    H = Hypergraph3(3, [(0, 1, 2)])
    assert e_ee(H, PairSet.from_pairs(3, [(0, 1)]), PairSet.from_pairs(3, [(1, 2)])) == 1
    assert e_ee(H, PairSet.empty(3), PairSet.full(3)) == 0
    assert k_ee(PairSet.from_pairs(3, [(0, 1)]), PairSet.from_pairs(3, [(1, 2)])) == 1
    assert k_ee(PairSet.from_pairs(3, [(0, 1)]), PairSet.from_pairs(3, [(2, 1)])) == 0
    assert k_ee(PairSet.full(5), PairSet.full(5)) == 125
    assert k_ee(PairSet.full(5), PairSet.full(5), distinct=True) == 60


def test_e_ee_full_is_six_edges():
    for seed in range(10):
        H = random_h(8, 0.3, seed)
        assert e_ee(H, PairSet.full(8), PairSet.full(8)) == 6 * H.m


def test_monotone():
    H = random_h(7, 0.5, 1)
    gen = np.random.default_rng(0)
    P = gen.random((7, 7)) < 0.5
    Q = gen.random((7, 7)) < 0.5
    P2 = P | (gen.random((7, 7)) < 0.3)
    assert e_ee(H, P, Q) <= e_ee(H, P2, Q)
    assert k_ee(P, Q) <= k_ee(P2, Q)


# -- adversary --------------------------------------------------------------------------------


def test_adversary_empty_refuted():
    H = Hypergraph3(30)
    c = ee_density_adversary(H, Fraction(1, 3), Fraction(1, 100), budget=10)
    assert c.verdict == Verdict.REFUTED
    assert ee_violation(H, c.witness["P"], c.witness["Q"], Fraction(1, 3), Fraction(1, 100))


def test_adversary_complete_distinct_no_violation():
    c = ee_density_adversary(Hypergraph3.complete(12), 1, 0, budget=200, restrict_distinct=True)
    assert c.verdict == Verdict.PASSED_BUDGET
    assert c.deviation <= 0


def test_adversary_never_certifies_and_respects_budget():
    H = cons.psi_hypergraph(cons.random_pairmap(30, 3, 2))
    c = ee_density_adversary(H, Fraction(1, 3), Fraction(1, 5), budget=25, seed=1)
    assert c.verdict == Verdict.PASSED_BUDGET
    assert c.details["evaluations"] <= 25


def test_adversary_witness_revalidates_on_psi():
    # finite-size fluctuations of order n^2.5 beat eta n^3 for small n
    H = cons.psi_hypergraph(cons.random_pairmap(40, 3, 0))
    c = ee_density_adversary(H, Fraction(1, 3), Fraction(1, 50), budget=200)
    assert c.verdict == Verdict.REFUTED
    P, Q = c.witness["P"], c.witness["Q"]
    assert ee_violation(H, P, Q, Fraction(1, 3), Fraction(1, 50))
    gap = Fraction(1, 3) * k_ee(P, Q) - e_ee(H, P, Q)
    assert gap == c.deviation * 40 ** 3


def test_adversary_passes_for_psi_at_n300():
    H = cons.psi_hypergraph(cons.random_pairmap(300, 3, 0))
    c = ee_density_adversary(H, Fraction(1, 3), Fraction(1, 50), budget=20)
    assert c.verdict == Verdict.PASSED_BUDGET
    assert c.deviation < Fraction(1, 50)
