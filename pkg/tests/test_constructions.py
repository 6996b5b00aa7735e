from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

import oracles
from turanforge import constructions as cons
from turanforge import embedk5, reduced
from turanforge.certificate import Verdict
from turanforge.hypercore import Hypergraph3, contains_clique


def test_pairmap_validation():
    with pytest.raises(ValueError):
        cons.PairMap(3, 3, {(0, 1): 0, (0, 2): 1})
    with pytest.raises(ValueError):
        cons.PairMap(3, 2, [0, 1, 2])
    with pytest.raises(ValueError):
        cons.PairMap(2, 2, np.array([[0, 1], [0, 0]]))
    pm = cons.PairMap(3, 3, {(0, 1): 1, (2, 0): 2, (1, 2): 0})
    assert pm(1, 0) == 1 and pm(0, 2) == 2
    assert pm.vector().tolist() == [1, 2, 0]
    with pytest.raises(ValueError):
        pm(1, 1)


def test_random_pairmap_deterministic():
    assert cons.random_pairmap(30, 3, 5) == cons.random_pairmap(30, 3, 5)
    assert cons.random_pairmap(30, 3, 5) != cons.random_pairmap(30, 3, 6)
    pm = cons.random_pairmap(2, 2, 0)
    assert pm(0, 1) in (0, 1)


def test_random_pairmap_balanced():
    counts = np.bincount(cons.random_pairmap(100, 3, 1).vector(), minlength=3)
    target = 4950 / 3
    assert np.all(np.abs(counts - target) <= 0.05 * target)


def test_random_pairmap_frozen_stream():
    # PCG64 stream is platform-independent; freeze the first values
    assert cons.random_pairmap(6, 3, 2024).vector().tolist() == FROZEN_2024


FROZEN_2024 = [0, 2, 0, 0, 0, 0, 2, 2, 2, 2, 0, 0, 2, 0, 0]


def test_psi_examples():
    assert cons.psi_hypergraph(cons.PairMap(6, 3, np.zeros(15, dtype=int))).m == 0
    pm = cons.PairMap(3, 3, {(0, 1): 1, (0, 2): 0, (1, 2): 0})
    assert cons.psi_hypergraph(pm).edge_set() == {(0, 1, 2)}
    with pytest.raises(ValueError):
        cons.psi_hypergraph(cons.random_pairmap(4, 2, 0))


@pytest.mark.parametrize("seed", range(15))
def test_psi_matches_oracle(seed):
    n = 4 + seed % 5
    pm = cons.random_pairmap(n, 3, seed)
    assert cons.psi_hypergraph(pm).edge_set() == set(oracles.psi_edges(n, pm.matrix.tolist()))


@pytest.mark.parametrize("seed", range(15))
def test_ramsey_matches_oracle(seed):
    n, r = 4 + seed % 4, 2 + seed % 3
    pm = cons.random_pairmap(n, r, seed)
    assert cons.ramsey_hypergraph(pm).edge_set() == set(oracles.ramsey_edges(n, pm.matrix.tolist()))


def test_ramsey_examples():
    assert cons.ramsey_hypergraph(cons.PairMap(5, 2, np.ones(10, dtype=int))).m == 0
    pm = cons.PairMap(3, 2, {(0, 1): 0, (0, 2): 0, (1, 2): 1})
    assert cons.ramsey_hypergraph(pm).edge_set() == {(0, 1, 2)}


def test_degenerate_n():
    assert cons.psi_hypergraph(cons.random_pairmap(2, 3, 0)).m == 0
    assert cons.ramsey_hypergraph(cons.random_pairmap(1, 2, 0)) == Hypergraph3(1)


def test_psi_k5_free_on_sampled_n7():
    for seed in range(30):
        H = cons.psi_hypergraph(cons.random_pairmap(7, 3, seed))
        assert contains_clique(H, 5).verdict == Verdict.REFUTED


def test_all_pairmaps_count_and_order():
    maps = list(cons.all_pairmaps(3, 2))
    assert len(maps) == 8
    assert len({tuple(m.vector()) for m in maps}) == 8
    assert cons.all_value_vectors(4, 3).shape == (3 ** 6, 6)


def test_mod3_reduced_shape():
    A = cons.mod3_reduced(3, 3)
    assert A.total_edges() == 9
    A9 = cons.mod3_reduced(3, 9)
    assert A9.total_edges() == 9 * 27
    with pytest.raises(ValueError):
        cons.mod3_reduced(5, 4)
    with pytest.raises(ValueError):
        cons.mod3_reduced(2, 3)


def test_mod3_reduced_randomized_is_relabelling():
    A = cons.mod3_reduced(5, 6, randomized=True, seed=9)
    assert reduced.min_ee_density(A).value == Fraction(1, 3)
    assert reduced.vvv_min_density(A) == Fraction(1, 3)


def test_random_preimage_homomorphism():
    A = cons.mod3_reduced(5, 3)
    for seed in range(5):
        A_h, h = cons.random_preimage(A, 4, seed)
        assert all(s == 4 for s in A_h.sizes.values())
        assert cons.is_homomorphism(A_h, A, h)
        assert reduced.supports_clique(A_h, 5).verdict == Verdict.REFUTED


def test_random_preimage_ell_one_is_a_sub_instance():
    A = cons.random_reduced(4, 3, 0.5, 3)
    A_h, h = cons.random_preimage(A, 1, 8)
    for t, E in A_h.edges.items():
        pij, pik, pjk = reduced.triple_pairs(t)
        assert E[0, 0, 0] == A.edges[t][h[pij][0], h[pik][0], h[pjk][0]]


def test_random_preimage_density_concentrates():
    A = cons.random_reduced(4, 5, 0.5, 0)
    A_h, _ = cons.random_preimage(A, 200, 1)
    for t in A.edges:
        assert abs(A_h.edges[t].mean() - A.edges[t].mean()) < 0.05


def test_random_preimage_errors():
    with pytest.raises(ValueError):
        cons.random_preimage(cons.mod3_reduced(3, 3), 0, 0)


def test_nonmonochromatic_complete():
    A, phi = cons.nonmonochromatic_complete(5)
    assert reduced.validate_bicolouring(A, phi)
    assert reduced.tau2(A, phi) == Fraction(1, 2)
    assert all(E.sum() == 6 for E in A.edges.values())


def test_random_bicoloured_respects_tau():
    tau = Fraction(1, 3) + Fraction(1, 20)
    for seed in range(4):
        A, phi = cons.random_bicoloured(5, 12, tau, seed)
        assert reduced.validate_bicolouring(A, phi)
        assert reduced.tau2(A, phi) >= tau
    with pytest.raises(ValueError):
        cons.random_bicoloured(5, 3, Fraction(2, 3), 0)


def test_random_reduced():
    A = cons.random_reduced(5, (1, 4), 0.7, 2)
    assert A == cons.random_reduced(5, (1, 4), 0.7, 2)
    assert all(1 <= s <= 4 for s in A.sizes.values())
    assert cons.random_reduced(4, 3, 0, 0).total_edges() == 0
    assert cons.random_reduced(4, 3, 1, 0).total_edges() == 4 * 27
    with pytest.raises(ValueError):
        cons.random_reduced(4, (3, 2), 0.5, 0)


def test_complete_supports_and_mod3_does_not():
    A = reduced.ReducedHypergraph.complete(range(5), 2)
    assert embedk5.brute_force_k5_support(A).verdict == Verdict.CERTIFIED
    assert embedk5.brute_force_k5_support(cons.mod3_reduced(5, 3)).verdict == Verdict.REFUTED
