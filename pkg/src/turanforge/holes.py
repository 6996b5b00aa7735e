"""Vertex families in reduced hypergraphs: holes, links and the cherries they control."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from turanforge.certificate import as_fraction
from turanforge.reduced import (
    CherrySet,
    Orientation,
    Pair,
    ReducedHypergraph,
    Transversal,
    Triple,
    orientation_classes,
    pair,
    triple_pairs,
)


class Relation(str, Enum):
    INTERSECTING = "INTERSECTING"
    DISJOINT = "DISJOINT"
    NEITHER = "NEITHER"


@dataclass
class VertexFamily:
    """One subset ``Phi^{ij}`` of every class ``P^{ij}`` over a domain of pairs."""

    sets: dict[Pair, np.ndarray]

    @classmethod
    def from_lists(cls, A: ReducedHypergraph, members: Mapping[Pair, Sequence[int]]) -> "VertexFamily":
        out = {}
        for p, xs in members.items():
            p = pair(*p)
            if p not in A.sizes:
                raise ValueError(f"{p} is not a pair of the index set")
            m = np.zeros(A.sizes[p], dtype=bool)
            m[list(xs)] = True
            out[p] = m
        return cls(out)

    @classmethod
    def full(cls, A: ReducedHypergraph, J: Sequence[int] | None = None) -> "VertexFamily":
        J = A.indices if J is None else sorted(J)
        return cls({p: np.ones(A.sizes[p], dtype=bool) for p in combinations(J, 2)})

    def domain(self) -> set[Pair]:
        return set(self.sets)

    def indices(self) -> list[int]:
        return sorted({i for p in self.sets for i in p})

    def __getitem__(self, p: Pair) -> np.ndarray:
        return self.sets[pair(*p)]

    def to_dict(self) -> dict:
        return {f"{i},{j}": np.flatnonzero(m).tolist() for (i, j), m in sorted(self.sets.items())}


def _domain(A: ReducedHypergraph, F: VertexFamily, J: Sequence[int] | None, nonempty: bool) -> list[int]:
    J = F.indices() if J is None else sorted(J)
    if not set(J) <= set(A.indices):
        raise ValueError("J must lie in the index set")
    for p in combinations(J, 2):
        if p not in F.sets:
            raise ValueError(f"family is not defined on pair {p}")
        m = F.sets[p]
        if m.shape != (A.sizes[p],):
            raise ValueError(f"family subset of {p} has length {m.shape[0]}, class has {A.sizes[p]}")
        if nonempty and not m.any():
            raise ValueError(f"family subset of {p} is empty")
    return J


def induced_edges(A: ReducedHypergraph, F: VertexFamily, t: Triple) -> int:
    """``e(Phi^{ij}, Phi^{ik}, Phi^{jk})``."""
    a, b, c = (F.sets[p] for p in triple_pairs(t))
    return int(A.edges[t][np.ix_(a, b, c)].sum())


def hole_mu(A: ReducedHypergraph, F: VertexFamily, J: Sequence[int] | None = None) -> Fraction:
    """Smallest ``mu`` for which ``F`` is a ``mu``-hole on ``J``."""
    J = _domain(A, F, J, nonempty=True)
    best = Fraction(0)
    for t in combinations(J, 3):
        total = A.edges[t].size
        if total:
            best = max(best, Fraction(induced_edges(A, F, t), total))
    return best


def hole_width(A: ReducedHypergraph, F: VertexFamily, J: Sequence[int] | None = None) -> Fraction:
    """Largest ``sigma`` with ``|Phi^{ij}| >= sigma |P^{ij}|`` on all pairs of ``J``."""
    J = _domain(A, F, J, nonempty=True)
    ratios = [Fraction(int(F.sets[p].sum()), A.sizes[p]) for p in combinations(J, 2)]
    if not ratios:
        raise ValueError("width needs at least two indices")
    return min(ratios)


def exceptional_cherries(A: ReducedHypergraph, F: VertexFamily, eps, orientation: Orientation | str,
                         J: Sequence[int] | None = None) -> CherrySet:
    """Cherries inside ``F`` whose neighbourhood meets ``F`` in at least ``eps`` of the completing class."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    orientation = Orientation(orientation)
    J = _domain(A, F, J, nonempty=False)
    out = {}
    for t in combinations(J, 3):
        p1, p2, p3 = orientation_classes(t, orientation)
        N = A.cherry_table(t, orientation)
        hits = N[:, :, F.sets[p3]].sum(axis=2).astype(np.int64)
        inside = F.sets[p1][:, None] & F.sets[p2][None, :]
        out[t] = inside & (hits * eps.denominator >= eps.numerator * A.sizes[p3])
    return CherrySet(orientation, out)


def q_link(A: ReducedHypergraph, Q: Transversal, K_star: Sequence[int], ell: int) -> VertexFamily:
    """``Lambda^{kk'} = N(Q^{k ell}, Q^{k' ell})`` for every pair of ``K_star``."""
    K_star = sorted(K_star)
    if ell in K_star:
        raise ValueError("ell must lie outside K_star")
    for k in K_star:
        if pair(k, ell) not in Q.choice:
            raise ValueError(f"transversal has no vertex on pair {pair(k, ell)}")
    sets = {}
    for k, k2 in combinations(K_star, 2):
        p1, p2 = pair(k, ell), pair(k2, ell)
        sets[(k, k2)] = A.nbr((p1, Q.choice[p1]), (p2, Q.choice[p2])).copy()
    return VertexFamily(sets)


def _trichotomy(flags: list[bool]) -> Relation:
    if all(flags):
        return Relation.INTERSECTING
    if not any(flags):
        return Relation.DISJOINT
    return Relation.NEITHER


def _side(T: Transversal, K: set[int]) -> list[int]:
    return sorted({i for p in T.choice for i in p} - K)


def link_overlaps(A: ReducedHypergraph, Q: Transversal, R: Transversal, K: Sequence[int],
                  ell: int, m: int) -> dict[Pair, Fraction]:
    """``|N(Q^{kl}, Q^{k'l}) cap N(R^{km}, R^{k'm})| / |P^{kk'}|`` for every pair of ``K``."""
    LQ = q_link(A, Q, K, ell)
    LR = q_link(A, R, K, m)
    return {p: Fraction(int((LQ.sets[p] & LR.sets[p]).sum()), A.sizes[p]) for p in LQ.sets}


def links_relation(A: ReducedHypergraph, Q: Transversal, R: Transversal, K: Sequence[int], delta,
                   ell: int | None = None, m: int | None = None) -> Relation:
    """Links of ``ell`` under ``Q`` and of ``m`` under ``R`` on ``K``.

    Without ``ell`` and ``m`` the relation is taken for the pair of
    transversals: intersecting (disjoint) when every ``(ell, m)`` in ``L x M``
    is, neither otherwise.
    """
    delta = as_fraction(delta)
    Kset = set(K)
    if len(Kset) < 2:
        raise ValueError("K needs at least two indices")
    L, M = _side(Q, Kset), _side(R, Kset)
    if set(L) & Kset or set(M) & Kset:
        raise ValueError("L and M must be disjoint from K")
    ells = L if ell is None else [ell]
    ms = M if m is None else [m]
    flags = []
    per = []
    for l in ells:
        for mm in ms:
            ov = link_overlaps(A, Q, R, K, l, mm)
            f = [v >= delta for v in ov.values()]
            per.append(_trichotomy(f))
            flags.extend(f)
    if ell is not None and m is not None:
        return per[0]
    if all(r == Relation.INTERSECTING for r in per):
        return Relation.INTERSECTING
    if all(r == Relation.DISJOINT for r in per):
        return Relation.DISJOINT
    return Relation.NEITHER


def holes_relation(A: ReducedHypergraph, F: VertexFamily, G: VertexFamily, J: Sequence[int], delta) -> Relation:
    """``|Phi^{ij} cap Psi^{ij}| >= delta |P^{ij}|`` for all pairs, none, or some."""
    delta = as_fraction(delta)
    J = _domain(A, F, J, nonempty=False)
    _domain(A, G, J, nonempty=False)
    if len(J) < 2:
        raise ValueError("J needs at least two indices")
    flags = [int((F.sets[p] & G.sets[p]).sum()) * delta.denominator >= delta.numerator * A.sizes[p]
             for p in combinations(J, 2)]
    return _trichotomy(flags)


def bad_cherries(A: ReducedHypergraph, F: VertexFamily, G: VertexFamily, gamma,
                 J: Sequence[int] | None = None) -> dict[Orientation, CherrySet]:
    """``gamma``-bad cherries in each orientation (``LEFT``, ``MIDDLE``, ``RIGHT``).

    A cherry is bad if it lies in ``Phi x Phi`` and its neighbourhood leaves
    ``Psi`` on at least ``gamma`` of the completing class, or the same with the
    roles of ``Phi`` and ``Psi`` exchanged.
    """
    gamma = as_fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    J = _domain(A, F, J, nonempty=False)
    _domain(A, G, J, nonempty=False)
    out = {}
    for o in Orientation:
        sets = {}
        for t in combinations(J, 3):
            p1, p2, p3 = orientation_classes(t, o)
            N = A.cherry_table(t, o)
            need = gamma.numerator * A.sizes[p3]
            bad = np.zeros(N.shape[:2], dtype=bool)
            for X, Y in ((F, G), (G, F)):
                escape = N[:, :, ~Y.sets[p3]].sum(axis=2).astype(np.int64)
                inside = X.sets[p1][:, None] & X.sets[p2][None, :]
                bad |= inside & (escape * gamma.denominator >= need)
            sets[t] = bad
        out[o] = CherrySet(o, sets)
    return out


def family_union(F: VertexFamily, G: VertexFamily) -> VertexFamily:
    if F.domain() != G.domain():
        raise ValueError("families must share their domain")
    for p in F.sets:
        if F.sets[p].shape != G.sets[p].shape:
            raise ValueError(f"families disagree on the size of class {p}")
    return VertexFamily({p: F.sets[p] | G.sets[p] for p in F.sets})
