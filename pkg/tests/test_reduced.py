from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

import oracles
from turanforge import constructions as cons
from turanforge import embedk5
from turanforge.certificate import Verdict
from turanforge.reduced import (
    BLUE,
    RED,
    Bicolouring,
    CherrySet,
    Orientation,
    ReducedHypergraph,
    Transversal,
    avoids,
    check_clique_witness,
    codegree,
    find_inhabited_triple,
    is_inhabited,
    is_wicked,
    min_ee_density,
    monochromatic_edge,
    supports_clique,
    tau2,
    validate_bicolouring,
    vvv_min_density,
)


def test_constructor_validation():
    with pytest.raises(ValueError):
        ReducedHypergraph([0, 1, 2], {(0, 1): 2, (0, 2): 2}, {})
    with pytest.raises(ValueError):
        ReducedHypergraph([0, 1], {(0, 1): 2, (0, 5): 1}, {})
    A = ReducedHypergraph.complete([0, 1, 2], 2)
    with pytest.raises(ValueError):
        A.check_vertex(((0, 1), 2))


def test_codegree_examples():
    full = ReducedHypergraph.complete(range(3), 4)
    assert codegree(full, ((0, 1), 0), ((0, 2), 3))[0] == 4
    empty = ReducedHypergraph.empty(range(3), 4)
    assert codegree(empty, ((0, 1), 0), ((1, 2), 1))[0] == 0
    A = cons.mod3_reduced(4, 3)
    for u, v in [(((0, 1), 0), ((0, 2), 1)), (((1, 3), 2), ((2, 3), 0)), (((0, 2), 1), ((2, 3), 2))]:
        assert codegree(A, u, v)[0] == 1
    with pytest.raises(ValueError):
        codegree(A, ((0, 1), 0), ((2, 3), 0))


def test_codegree_tables_agree_with_edges():
    A = cons.random_reduced(4, (2, 4), 0.5, 5)
    for t, E in A.edges.items():
        pij, pik, pjk = (t[0], t[1]), (t[0], t[2]), (t[1], t[2])
        for a, b, c in np.ndindex(E.shape):
            assert A.nbr((pij, a), (pik, b))[c] == E[a, b, c]
            assert A.nbr((pik, b), (pij, a))[c] == E[a, b, c]
            assert A.nbr((pij, a), (pjk, c))[b] == E[a, b, c]
            assert A.nbr((pik, b), (pjk, c))[a] == E[a, b, c]


def test_min_ee_density_examples():
    assert min_ee_density(ReducedHypergraph.complete(range(4), 3)).value == 1
    assert min_ee_density(cons.mod3_reduced(5, 3)).value == Fraction(1, 3)
    A = ReducedHypergraph.complete(range(3), 2)
    E = A.edges[(0, 1, 2)].copy()
    E[0, 0, 0] = False
    rep = min_ee_density(A.with_constituents({(0, 1, 2): E}))
    assert rep.value == Fraction(1, 2)
    with pytest.raises(ValueError):
        min_ee_density(ReducedHypergraph([0, 1, 2], {(0, 1): 0, (0, 2): 1, (1, 2): 1}, {}))


@pytest.mark.parametrize("seed", range(12))
def test_min_ee_density_matches_oracle(seed):
    A = cons.random_reduced(4 + seed % 2, (1, 4), 0.6, seed)
    rep = min_ee_density(A)
    assert rep.value == oracles.min_ee_density(A)
    t, o, a, b = rep.witness
    assert Fraction(int(A.cherry_table(t, o)[a, b].sum()), A.cherry_table(t, o).shape[2]) == rep.value
    assert min(rep.per_orientation.values()) == rep.value


def test_vvv_min_density():
    assert vvv_min_density(ReducedHypergraph.complete(range(4), 2)) == 1
    assert vvv_min_density(cons.mod3_reduced(5, 6)) == Fraction(1, 3)
    assert vvv_min_density(ReducedHypergraph.empty(range(4), 2)) == 0
    A = cons.random_reduced(6, 3, 0.5, 1)
    assert vvv_min_density(A, [0, 1], [2, 3], [4, 5]) >= vvv_min_density(A)
    with pytest.raises(ValueError):
        vvv_min_density(A, [0, 1], [1, 2], [3])


def test_supports_examples():
    c = supports_clique(ReducedHypergraph.complete(range(5), 2), 5)
    assert c.verdict == Verdict.CERTIFIED and c.witness["J"] == [0, 1, 2, 3, 4]
    assert all(v == 0 for v in c.witness["transversal"].choice.values())
    for k in (5, 6):
        assert supports_clique(cons.mod3_reduced(k, 3), 5).verdict == Verdict.REFUTED
    with pytest.raises(ValueError):
        supports_clique(cons.mod3_reduced(4, 3), 5)


def test_nonmono_witness_is_pentagon():
    A, phi = cons.nonmonochromatic_complete(5)
    c = supports_clique(A, 5)
    assert c.verdict == Verdict.CERTIFIED
    T = c.witness["transversal"]
    assert check_clique_witness(A, c.witness["J"], T)
    # the colouring on the ten pairs is triangle-free in both colours
    col = {p: int(phi.colour[p][T[p]]) for p in T.choice}
    for t in combinations(range(5), 3):
        cs = {col[(t[0], t[1])], col[(t[0], t[2])], col[(t[1], t[2])]}
        assert len(cs) == 2
    assert sum(1 for v in col.values() if v == BLUE) == 5


@pytest.mark.parametrize("seed", range(30))
def test_supports_matches_full_enumeration(seed):
    gen = cons.rng(seed)
    A = cons.random_reduced(int(gen.integers(5, 7)), (1, 3), float(gen.uniform(0.5, 0.95)), seed)
    c = supports_clique(A, 5)
    naive = oracles.supports_k5(A)
    assert (c.verdict == Verdict.CERTIFIED) == (naive is not None)
    if naive is not None:
        assert c.witness["J"] == list(naive[0])
        assert c.witness["transversal"].choice == naive[1]


def test_supports_budget():
    A = cons.mod3_reduced(6, 3)
    c = supports_clique(A, 5, budget=10)
    assert c.verdict == Verdict.PASSED_BUDGET


def test_is_wicked():
    A = cons.mod3_reduced(5, 3)
    assert is_wicked(A, 0) is True
    assert is_wicked(A, Fraction(1, 100)) is False
    assert is_wicked(ReducedHypergraph.complete(range(5), 2), Fraction(1, 10)) is False
    assert is_wicked(ReducedHypergraph.empty(range(5), 2), Fraction(1, 10)) is False
    assert is_wicked(A, 0, budget=5) is None


def test_inhabited_examples():
    c = find_inhabited_triple(ReducedHypergraph.complete(range(5), 2), [0, 1, 2, 3])
    assert c.verdict == Verdict.CERTIFIED
    A = cons.mod3_reduced(3, 3)
    c = find_inhabited_triple(A, [0, 1, 2])
    Q, R, S = c.witness
    assert is_inhabited(A, Q, R, S, [0, 1, 2])
    assert find_inhabited_triple(ReducedHypergraph.empty(range(4), 2), [0, 1, 2]).verdict == Verdict.REFUTED
    with pytest.raises(ValueError):
        find_inhabited_triple(A, [0, 1])


def test_inhabited_partite_and_avoid():
    A = cons.random_reduced(6, 3, 0.8, 4)
    c = find_inhabited_triple(A, K=[0, 1], L=[2, 3], M=[4, 5])
    assert c.verdict == Verdict.CERTIFIED
    Q, R, S = c.witness
    assert is_inhabited(A, Q, R, S, K=[0, 1], L=[2, 3], M=[4, 5])
    gen = np.random.default_rng(1)
    forbid = CherrySet(Orientation.LEFT, {t: gen.random((3, 3)) < 0.4 for t in A.edges})
    c = find_inhabited_triple(A, [0, 1, 2, 3], avoid=[forbid])
    if c.verdict == Verdict.CERTIFIED:
        assert all(avoids(T, forbid, A) for T in c.witness)
        assert is_inhabited(A, *c.witness, [0, 1, 2, 3])
    with pytest.raises(ValueError):
        find_inhabited_triple(A, K=[0, 1], L=[1, 2], M=[3])
    bad = CherrySet(Orientation.LEFT, {(0, 1, 2): np.zeros((2, 2), dtype=bool)})
    with pytest.raises(ValueError):
        find_inhabited_triple(A, [0, 1, 2], avoid=[bad])


def test_inhabited_all_avoided_is_refuted():
    A = ReducedHypergraph.complete(range(3), 2)
    everything = CherrySet(Orientation.LEFT, {(0, 1, 2): np.ones((2, 2), dtype=bool)})
    assert find_inhabited_triple(A, [0, 1, 2], avoid=[everything]).verdict == Verdict.REFUTED


def test_avoids():
    A = ReducedHypergraph.complete(range(4), 3)
    T = Transversal.on_set([0, 1, 2, 3], {p: 1 for p in combinations(range(4), 2)})
    assert avoids(T, CherrySet(Orientation.LEFT), A)
    M = np.zeros((3, 3), dtype=bool)
    M[1, 1] = True
    assert not avoids(T, CherrySet(Orientation.MIDDLE, {(0, 2, 3): M}), A)
    assert avoids(T, CherrySet(Orientation.MIDDLE, {(0, 2, 3): ~M}), A)
    with pytest.raises(ValueError):
        avoids(T, CherrySet(Orientation.LEFT, {(0, 1, 2): np.zeros((2, 3), dtype=bool)}), A)


@pytest.mark.parametrize("seed", range(8))
def test_avoids_matches_pair_scan(seed):
    gen = np.random.default_rng(seed)
    A = ReducedHypergraph.complete(range(5), 4)
    T = Transversal.on_set(range(5), {p: int(gen.integers(4)) for p in combinations(range(5), 2)})
    o = list(Orientation)[seed % 3]
    C = CherrySet(o, {t: gen.random((4, 4)) < 0.1 for t in A.edges})
    slot = {Orientation.LEFT: (0, 1), Orientation.MIDDLE: (0, 2), Orientation.RIGHT: (1, 2)}[o]
    hit = False
    for t in combinations(range(5), 3):
        pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
        a, b = T[pairs[slot[0]]], T[pairs[slot[1]]]
        hit |= bool(C.sets[t][a, b])
    assert avoids(T, C, A) == (not hit)


def test_bicolouring_examples():
    A, phi = cons.nonmonochromatic_complete(5)
    assert validate_bicolouring(A, phi) and tau2(A, phi) == Fraction(1, 2)
    red = Bicolouring({p: np.full(2, RED, dtype=np.int8) for p in A.sizes})
    assert not validate_bicolouring(A, red)
    M = cons.mod3_reduced(4, 3)
    blocks = Bicolouring({p: np.array([RED, BLUE, BLUE], dtype=np.int8) for p in M.sizes})
    assert not validate_bicolouring(M, blocks)
    t, a, b, c = monochromatic_edge(M, blocks)
    assert sorted((a, b, c)) == [1, 1, 2]


def test_tau2_is_a_minimum_over_fewer_cherries():
    for seed in range(5):
        A, phi = cons.random_bicoloured(5, 6, Fraction(1, 3), seed)
        assert tau2(A, phi) >= min_ee_density(A).value


def test_random_instances_agree_with_bitset_and_naive_kernels():
    for seed in range(10):
        A = cons.random_reduced(5, (2, 3), 0.75, 100 + seed)
        assert supports_clique(A, 5).verdict == embedk5.brute_force_k5_support(A).verdict
