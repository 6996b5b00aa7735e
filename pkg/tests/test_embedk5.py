from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

import oracles
from turanforge import constructions as cons
from turanforge.certificate import Verdict
from turanforge.embedk5 import (
    BLUE_LABELS,
    RED_LABELS,
    brute_force_k5_support,
    default_xi,
    embed_k5_bicoloured,
    label_colour,
    pentagons,
)
from turanforge.errors import CapabilityError
from turanforge.reduced import BLUE, RED, Bicolouring, ReducedHypergraph, supports_clique, tau2


def test_pentagon_pattern_is_triangle_free():
    for t in combinations(range(1, 6), 3):
        cols = {label_colour(t[0], t[1]), label_colour(t[0], t[2]), label_colour(t[1], t[2])}
        assert cols == {RED, BLUE}
    assert len(set(BLUE_LABELS) | set(RED_LABELS)) == 10


def test_twelve_pentagons_cover_every_triangle_free_colouring():
    J = [0, 1, 2, 3, 4]
    seen = set()
    for labels in pentagons(J):
        inv = {v: k for k, v in labels.items()}
        seen.add(frozenset(p for p in combinations(J, 2) if label_colour(inv[p[0]], inv[p[1]]) == BLUE))
    # all 2-colourings of K5 without monochromatic triangles, by brute force
    want = set()
    pairs = list(combinations(J, 2))
    for mask in range(1 << 10):
        blue = {pairs[i] for i in range(10) if mask >> i & 1}
        if all(len({(t[0], t[1]) in blue, (t[0], t[2]) in blue, (t[1], t[2]) in blue}) == 2
               for t in combinations(J, 3)):
            want.add(frozenset(blue))
    assert seen == want and len(seen) == 12


def test_default_xi():
    assert default_xi(Fraction(1, 10)) == Fraction(1, 40)
    assert default_xi(Fraction(1, 2)) == Fraction(1, 24)


def test_nonmono_complete_greedy():
    A, phi = cons.nonmonochromatic_complete(5)
    c = embed_k5_bicoloured(A, phi, Fraction(1, 10))
    assert c.verdict == Verdict.CERTIFIED
    assert c.details["backtracks"] == 0
    assert c.details["tau2"] == Fraction(1, 2)
    w = c.witness
    assert w.validate(A, phi)
    for lab, v in w.vertices.items():
        assert phi.colour[w.class_of(lab)][v] == label_colour(*lab)


def test_hypothesis_failure_reported_without_search():
    A, phi = cons.random_bicoloured(5, 6, Fraction(1, 6), 0)
    assert tau2(A, phi) < Fraction(1, 3) + Fraction(1, 10)
    c = embed_k5_bicoloured(A, phi, Fraction(1, 10))
    assert c.verdict == Verdict.PASSED_BUDGET
    assert c.details["hypothesis"] is False
    assert "nodes" not in c.details


def test_invalid_bicolouring_rejected():
    A = ReducedHypergraph.complete(range(5), 2)
    phi = Bicolouring({p: np.array([RED, BLUE], dtype=np.int8) for p in A.sizes})
    with pytest.raises(ValueError):
        embed_k5_bicoloured(A, phi, Fraction(1, 10))


@pytest.mark.parametrize("seed", range(6))
def test_random_instances_agree_with_oracle(seed):
    tau = Fraction(1, 3) + Fraction(1, 20)
    A, phi = cons.random_bicoloured(5, 6, tau, seed)
    c = embed_k5_bicoloured(A, phi, Fraction(1, 20))
    o = brute_force_k5_support(A, phi)
    assert c.verdict in (Verdict.CERTIFIED, Verdict.REFUTED)
    assert c.verdict == o.verdict
    if c.found:
        colours = phi.swapped() if c.details["swapped"] else phi
        assert c.witness.validate(A, colours)


def test_refutes_on_sparse_instance_and_oracle_agrees():
    # thin out a non-monochromatic instance until no K5 survives
    A, phi = cons.nonmonochromatic_complete(5, 2)
    E = {t: M.copy() for t, M in A.edges.items()}
    E[(0, 1, 2)][:] = False
    B = A.with_constituents(E)
    c = embed_k5_bicoloured(B, phi, Fraction(1, 10), enforce_hypothesis=False)
    assert c.verdict == Verdict.REFUTED
    assert brute_force_k5_support(B, phi).verdict == Verdict.REFUTED
    assert supports_clique(B, 5).verdict == Verdict.REFUTED


def test_monotone_under_adding_edges():
    for seed in range(4):
        A, phi = cons.random_bicoloured(5, 6, Fraction(1, 3) + Fraction(1, 20), seed)
        c = embed_k5_bicoloured(A, phi, Fraction(1, 20))
        # add every non-monochromatic triple: still valid, still supported
        full, _ = cons._nonmono_from_colours(A.indices, phi.colour)
        d = embed_k5_bicoloured(full, phi, Fraction(1, 20))
        if c.verdict == Verdict.CERTIFIED:
            assert d.verdict == Verdict.CERTIFIED


def test_budget():
    A, phi = cons.random_bicoloured(5, 12, Fraction(1, 3) + Fraction(1, 20), 0)
    c = embed_k5_bicoloured(A, phi, Fraction(1, 20), budget=1)
    assert c.verdict == Verdict.PASSED_BUDGET
    assert c.details["hypothesis"] is True


def test_brute_force_examples():
    assert brute_force_k5_support(cons.mod3_reduced(5, 3)).verdict == Verdict.REFUTED
    c = brute_force_k5_support(ReducedHypergraph.complete(range(5), 2))
    assert c.verdict == Verdict.CERTIFIED and c.witness["J"] == [0, 1, 2, 3, 4]
    with pytest.raises(CapabilityError):
        brute_force_k5_support(cons.mod3_reduced(5, 3), cap=10)
    with pytest.raises(ValueError):
        brute_force_k5_support(cons.mod3_reduced(4, 3))


@pytest.mark.parametrize("seed", range(10))
def test_brute_force_matches_full_enumeration(seed):
    A = cons.random_reduced(5, (1, 3), 0.85, 40 + seed)
    naive = oracles.supports_k5(A)
    assert (brute_force_k5_support(A).verdict == Verdict.CERTIFIED) == (naive is not None)


def test_witness_json_shape():
    A, phi = cons.nonmonochromatic_complete(5)
    d = embed_k5_bicoloured(A, phi, Fraction(1, 10)).witness.to_dict()
    assert sorted(d["vertices"]) == sorted(["b12", "b23", "b34", "b45", "b15", "r13", "r24", "r35", "r14", "r25"])
    assert d["J"] == [0, 1, 2, 3, 4]


GREEDY_ORDER = ["14", "34", "24", "12", "13", "15", "45", "25", "35", "23"]


@pytest.mark.parametrize("order", [GREEDY_ORDER, GREEDY_ORDER[::-1], ["12", "23", "34", "45", "15",
                                                                   "13", "24", "35", "14", "25"]])
def test_step_order_knob_agrees(order):
    for seed in range(5):
        A, phi = cons.random_bicoloured(5, 6, Fraction(1, 3) + Fraction(1, 20), seed)
        base = embed_k5_bicoloured(A, phi, Fraction(1, 20))
        c = embed_k5_bicoloured(A, phi, Fraction(1, 20), order=order)
        assert c.verdict == base.verdict
        if c.found:
            colours = phi.swapped() if c.details["swapped"] else phi
            assert c.witness.validate(A, colours)
    A, phi = cons.nonmonochromatic_complete(5, 2)
    E = {t: M.copy() for t, M in A.edges.items()}
    E[(0, 1, 2)][:] = False
    B = A.with_constituents(E)
    assert embed_k5_bicoloured(B, phi, Fraction(1, 10), enforce_hypothesis=False,
                               order=order).verdict == Verdict.REFUTED


def test_step_order_validation():
    A, phi = cons.nonmonochromatic_complete(5)
    with pytest.raises(ValueError):
        embed_k5_bicoloured(A, phi, Fraction(1, 10), order=GREEDY_ORDER[:-1] + ["14"])
