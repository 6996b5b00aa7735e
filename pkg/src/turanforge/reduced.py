"""Reduced hypergraphs: index set, vertex classes per index pair, tripartite constituents.

A reduced vertex is addressed as ``(pair, a)`` with ``pair = (i, j)``, ``i < j``,
and ``a`` its position inside the class.  The constituent of ``i < j < k`` is a
boolean array ``E[a, b, c]`` over ``P^{ij} x P^{ik} x P^{jk}``.

Cherries follow the index order: a *left* cherry lives on ``(P^{ij}, P^{ik})``,
a *middle* one on ``(P^{ij}, P^{jk})`` and a *right* one on ``(P^{ik}, P^{jk})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from turanforge import kernels
from turanforge.certificate import Certificate, Method, Verdict

Pair = tuple[int, int]
Triple = tuple[int, int, int]
Vertex = tuple[Pair, int]

RED = 0
BLUE = 1


class Orientation(str, Enum):
    LEFT = "LEFT"
    MIDDLE = "MIDDLE"
    RIGHT = "RIGHT"


# (roles of the two cherry classes, role of the completing class); roles 0=ij, 1=ik, 2=jk
ROLES = {
    Orientation.LEFT: ((0, 1), 2),
    Orientation.MIDDLE: ((0, 2), 1),
    Orientation.RIGHT: ((1, 2), 0),
}


def pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError("a pair needs two distinct indices")
    return (i, j) if i < j else (j, i)


def triple_pairs(t: Triple) -> tuple[Pair, Pair, Pair]:
    i, j, k = t
    return (i, j), (i, k), (j, k)


def orientation_classes(t: Triple, orientation: Orientation) -> tuple[Pair, Pair, Pair]:
    """Classes ``(first, second, completing)`` of ``orientation`` inside triple ``t``."""
    pairs = triple_pairs(t)
    (r1, r2), r3 = ROLES[Orientation(orientation)]
    return pairs[r1], pairs[r2], pairs[r3]


class ReducedHypergraph:
    """Immutable reduced hypergraph.

    Parameters
    ----------
    indices:
        Index labels; stored sorted.
    sizes:
        Class size for every pair ``(i, j)`` with ``i < j``.
    constituents:
        Boolean array for every triple ``i < j < k``; missing triples are empty.
    """

    def __init__(self, indices: Iterable[int], sizes: Mapping[Pair, int],
                 constituents: Mapping[Triple, np.ndarray] | None = None):
        self.indices: tuple[int, ...] = tuple(sorted(int(i) for i in indices))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("indices must be distinct")
        self.sizes: dict[Pair, int] = {}
        for p in combinations(self.indices, 2):
            if p not in sizes:
                raise ValueError(f"missing class size for pair {p}")
            s = int(sizes[p])
            if s < 0:
                raise ValueError(f"negative class size for pair {p}")
            self.sizes[p] = s
        extra = set(sizes) - set(self.sizes)
        if extra:
            raise ValueError(f"class sizes given for pairs outside the index set: {sorted(extra)}")
        constituents = dict(constituents or {})
        self.edges: dict[Triple, np.ndarray] = {}
        for t in combinations(self.indices, 3):
            shape = tuple(self.sizes[p] for p in triple_pairs(t))
            E = constituents.pop(t, None)
            if E is None:
                E = np.zeros(shape, dtype=bool)
            E = np.array(E, dtype=bool)
            if E.shape != shape:
                raise ValueError(f"constituent {t} has shape {E.shape}, expected {shape}")
            E.setflags(write=False)
            self.edges[t] = E
        if constituents:
            raise ValueError(f"constituents given for triples outside the index set: {sorted(constituents)}")

    # -- structure -----------------------------------------------------------------

    @property
    def pairs(self) -> list[Pair]:
        return list(self.sizes)

    @property
    def triples(self) -> list[Triple]:
        return list(self.edges)

    def vertices(self) -> Iterable[Vertex]:
        for p, s in self.sizes.items():
            for a in range(s):
                yield (p, a)

    def edge_count(self, t: Triple) -> int:
        return int(self.edges[t].sum())

    def total_edges(self) -> int:
        return sum(int(E.sum()) for E in self.edges.values())

    def is_edge(self, t: Triple, a: int, b: int, c: int) -> bool:
        return bool(self.edges[t][a, b, c])

    def check_vertex(self, v: Vertex) -> None:
        p, a = v
        if p not in self.sizes:
            raise ValueError(f"{p} is not a pair of the index set")
        if not 0 <= a < self.sizes[p]:
            raise ValueError(f"vertex {a} outside class {p} of size {self.sizes[p]}")

    def restrict(self, J: Sequence[int]) -> "ReducedHypergraph":
        J = sorted(J)
        if not set(J) <= set(self.indices):
            raise ValueError("restriction indices must lie in the index set")
        sizes = {p: self.sizes[p] for p in combinations(J, 2)}
        return ReducedHypergraph(J, sizes, {t: self.edges[t] for t in combinations(J, 3)})

    def with_constituents(self, constituents: Mapping[Triple, np.ndarray]) -> "ReducedHypergraph":
        merged = dict(self.edges)
        merged.update(constituents)
        return ReducedHypergraph(self.indices, self.sizes, merged)

    @classmethod
    def complete(cls, indices: Iterable[int], class_size: int) -> "ReducedHypergraph":
        idx = sorted(indices)
        sizes = {p: class_size for p in combinations(idx, 2)}
        full = np.ones((class_size,) * 3, dtype=bool)
        return cls(idx, sizes, {t: full for t in combinations(idx, 3)})

    @classmethod
    def empty(cls, indices: Iterable[int], class_size: int) -> "ReducedHypergraph":
        idx = sorted(indices)
        return cls(idx, {p: class_size for p in combinations(idx, 2)})

    # -- neighbourhoods ------------------------------------------------------------

    def locate(self, pu: Pair, pv: Pair) -> tuple[Triple, Orientation, bool]:
        """Triple spanned by two classes sharing one index, the cherry orientation,
        and whether ``(pu, pv)`` is given in reverse orientation order."""
        shared = set(pu) & set(pv)
        if len(shared) != 1 or pu not in self.sizes or pv not in self.sizes:
            raise ValueError(f"classes {pu} and {pv} do not share exactly one index of a common triple")
        t = tuple(sorted(set(pu) | set(pv)))
        pairs = triple_pairs(t)
        ru, rv = pairs.index(pu), pairs.index(pv)
        lo, hi = min(ru, rv), max(ru, rv)
        orientation = {(0, 1): Orientation.LEFT, (0, 2): Orientation.MIDDLE, (1, 2): Orientation.RIGHT}[(lo, hi)]
        return t, orientation, ru > rv

    def third_class(self, pu: Pair, pv: Pair) -> Pair:
        t, orientation, _ = self.locate(pu, pv)
        return orientation_classes(t, orientation)[2]

    def cherry_table(self, t: Triple, orientation: Orientation) -> np.ndarray:
        """View ``N[a, b, :]``: completing-class neighbourhood of cherry ``(a, b)``."""
        E = self.edges[t]
        if orientation == Orientation.LEFT:
            return E
        if orientation == Orientation.MIDDLE:
            return E.transpose(0, 2, 1)
        return E.transpose(1, 2, 0)

    def nbr(self, u: Vertex, v: Vertex) -> np.ndarray:
        """Boolean mask of the common neighbourhood ``N(u, v)`` in the third class."""
        (pu, a), (pv, b) = u, v
        t, orientation, swapped = self.locate(pu, pv)
        if swapped:
            a, b = b, a
        return self.cherry_table(t, orientation)[a, b]

    def pair_nbr(self, x: Vertex, pu: Pair, pv: Pair) -> np.ndarray:
        """Matrix ``M[a, b]`` of pairs in ``P^{pu} x P^{pv}`` forming an edge with ``x``."""
        px, c = x
        t = tuple(sorted(set(px) | set(pu) | set(pv)))
        if len(t) != 3 or len({px, pu, pv}) != 3:
            raise ValueError("the three classes must be the three pairs of one triple")
        pairs = triple_pairs(t)
        E = self.edges[t]
        order = [pairs.index(px), pairs.index(pu), pairs.index(pv)]
        return np.transpose(E, order)[c]

    # -- packed tables for the bitset kernels -------------------------------------

    @cached_property
    def words(self) -> int:
        return kernels.words_for(max(self.sizes.values(), default=1))

    @cached_property
    def packed(self) -> tuple[np.ndarray, dict[tuple[Triple, Orientation], tuple[int, int]]]:
        """All cherry tables packed as rows of one ``uint64`` array.

        Returns the row array and, per ``(triple, orientation)``, the row offset
        and the stride of the cherry's second coordinate.
        """
        blocks = []
        index = {}
        offset = 0
        for t in self.edges:
            for o in Orientation:
                N = self.cherry_table(t, o)
                rows = kernels.pack_bits(N, self.words).reshape(-1, self.words)
                index[(t, o)] = (offset, N.shape[1])
                blocks.append(rows)
                offset += rows.shape[0]
        blocks.append(np.zeros((1, self.words), dtype=np.uint64))
        table = np.ascontiguousarray(np.concatenate(blocks, axis=0))
        table.setflags(write=False)
        return table, index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedHypergraph):
            return NotImplemented
        return (self.indices == other.indices and self.sizes == other.sizes
                and all(np.array_equal(self.edges[t], other.edges[t]) for t in self.edges))

    def __repr__(self) -> str:
        return f"ReducedHypergraph(indices={list(self.indices)}, edges={self.total_edges()})"


# -- selection types ---------------------------------------------------------------


@dataclass
class Transversal:
    """One vertex per pair of a domain.

    ``choice`` maps sorted pairs to positions.  ``kind`` is ``"J"`` for a
    ``J``-transversal and ``"cross"`` for a ``(K, L)``-transversal.
    """

    choice: dict[Pair, int]
    kind: str = "J"

    @classmethod
    def on_set(cls, J: Sequence[int], values: Mapping[Pair, int]) -> "Transversal":
        return cls({p: int(values[p]) for p in combinations(sorted(J), 2)}, "J")

    @classmethod
    def cross(cls, K: Sequence[int], L: Sequence[int], values: Mapping[Pair, int]) -> "Transversal":
        return cls({pair(k, l): int(values[pair(k, l)]) for k in K for l in L}, "cross")

    def __getitem__(self, p: Pair) -> int:
        return self.choice[pair(*p)]

    def domain(self) -> set[Pair]:
        return set(self.choice)

    def validate(self, A: ReducedHypergraph) -> None:
        for p, a in self.choice.items():
            A.check_vertex((p, a))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "choice": {f"{i},{j}": a for (i, j), a in sorted(self.choice.items())}}


@dataclass
class CherrySet:
    """Per-triple sets of oriented cherries, each a boolean matrix over the two classes."""

    orientation: Orientation
    sets: dict[Triple, np.ndarray] = field(default_factory=dict)

    def size(self, t: Triple) -> int:
        M = self.sets.get(t)
        return 0 if M is None else int(M.sum())

    def total(self) -> int:
        return sum(int(M.sum()) for M in self.sets.values())

    def contains(self, t: Triple, a: int, b: int) -> bool:
        M = self.sets.get(t)
        return bool(M is not None and M[a, b])

    def check_against(self, A: ReducedHypergraph) -> None:
        for t, M in self.sets.items():
            if t not in A.edges:
                raise ValueError(f"cherry set names triple {t} outside the index set")
            p1, p2, _ = orientation_classes(t, self.orientation)
            if M.shape != (A.sizes[p1], A.sizes[p2]):
                raise ValueError(f"cherry matrix for {t} has shape {M.shape}, orientation "
                                 f"{self.orientation.value} needs {(A.sizes[p1], A.sizes[p2])}")

    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation.value,
            "cherries": {f"{i},{j},{k}": np.argwhere(M).tolist() for (i, j, k), M in sorted(self.sets.items())},
        }


@dataclass
class Bicolouring:
    """Colour (``RED`` = 0 or ``BLUE`` = 1) of every reduced vertex, per class."""

    colour: dict[Pair, np.ndarray]

    @classmethod
    def from_lists(cls, colours: Mapping[Pair, Sequence[int]]) -> "Bicolouring":
        return cls({pair(*p): np.asarray(c, dtype=np.int8) for p, c in colours.items()})

    def red(self, p: Pair) -> np.ndarray:
        return self.colour[p] == RED

    def blue(self, p: Pair) -> np.ndarray:
        return self.colour[p] == BLUE

    def swapped(self) -> "Bicolouring":
        return Bicolouring({p: (1 - c).astype(np.int8) for p, c in self.colour.items()})

    def check_total(self, A: ReducedHypergraph) -> None:
        for p, s in A.sizes.items():
            c = self.colour.get(p)
            if c is None or c.shape != (s,):
                raise ValueError(f"colouring does not cover class {p}")
            if np.any((c != RED) & (c != BLUE)):
                raise ValueError(f"colouring of class {p} uses a value other than red/blue")

    def to_dict(self) -> dict:
        names = {RED: "red", BLUE: "blue"}
        return {f"{i},{j}": [names[int(x)] for x in c] for (i, j), c in sorted(self.colour.items())}


# -- density -------------------------------------------------------------------------


@dataclass
class DensityReport:
    """Minimum codegree ratio, where it is attained, and the per-orientation minima."""

    value: Fraction
    witness: tuple[Triple, Orientation, int, int] | None
    per_orientation: dict[Orientation, Fraction]

    def to_dict(self) -> dict:
        from turanforge.certificate import jsonable

        w = None
        if self.witness is not None:
            t, o, a, b = self.witness
            w = {"triple": list(t), "orientation": o.value, "cherry": [a, b]}
        return {"value": jsonable(self.value), "witness": w,
                "per_orientation": {o.value: jsonable(v) for o, v in self.per_orientation.items()}}


def _nonempty_classes(A: ReducedHypergraph) -> None:
    for p, s in A.sizes.items():
        if s == 0:
            raise ValueError(f"class {p} is empty")


def codegree(A: ReducedHypergraph, u: Vertex, v: Vertex) -> tuple[int, np.ndarray]:
    """Number and mask of completing vertices for two vertices sharing one index."""
    A.check_vertex(u)
    A.check_vertex(v)
    mask = A.nbr(u, v)
    return int(mask.sum()), mask


def min_ee_density(A: ReducedHypergraph) -> DensityReport:
    """Minimum over all triples, orientations and cherries of ``codegree / |third class|``.

    ``A`` is ``(d, ee)``-dense iff ``value >= d``.  With fewer than three
    indices nothing is quantified and the value is 1.
    """
    _nonempty_classes(A)
    best: Fraction | None = None
    witness = None
    per: dict[Orientation, Fraction] = {}
    for o in Orientation:
        o_best: Fraction | None = None
        for t in A.edges:
            N = A.cherry_table(t, o)
            deg = N.sum(axis=2)
            a, b = np.unravel_index(int(np.argmin(deg)), deg.shape)
            val = Fraction(int(deg[a, b]), N.shape[2])
            if o_best is None or val < o_best:
                o_best = val
            if best is None or val < best:
                best, witness = val, (t, o, int(a), int(b))
        per[o] = Fraction(1) if o_best is None else o_best
    return DensityReport(Fraction(1) if best is None else best, witness, per)


def vvv_min_density(A: ReducedHypergraph, K: Sequence[int] | None = None,
                    L: Sequence[int] | None = None, M: Sequence[int] | None = None) -> Fraction:
    """Minimum constituent density ``e(A^{ijk}) / (|P^{ij}||P^{ik}||P^{jk}|)``.

    With a tripartition, only triples with one index from each of ``K, L, M``
    are measured.
    """
    _nonempty_classes(A)
    if K is None and L is None and M is None:
        family = list(A.edges)
    else:
        if K is None or L is None or M is None:
            raise ValueError("give all three of K, L, M or none")
        sets = [set(K), set(L), set(M)]
        if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
            raise ValueError("K, L, M must be pairwise disjoint")
        if not (sets[0] | sets[1] | sets[2]) <= set(A.indices):
            raise ValueError("K, L, M must lie in the index set")
        family = sorted({tuple(sorted((i, j, k))) for i in K for j in L for k in M})
    if not family:
        return Fraction(1)
    return min(Fraction(int(A.edges[t].sum()), int(A.edges[t].size)) for t in family)


# -- generic backtracking over reduced vertices ------------------------------------


class VertexCSP:
    """Variables ranging over reduced classes, linked by edge and cherry constraints.

    Variables are assigned in creation order; every constraint is checked when
    its last variable is assigned.  ``solve`` drives the bitset kernel,
    ``solve_naive`` the independent membership-check kernel.
    """

    def __init__(self, A: ReducedHypergraph):
        self.A = A
        self.var_class: list[Pair] = []
        self.allowed: list[np.ndarray] = []
        self.ternary: list[tuple[Triple, int, int, int]] = []
        self.binary: list[tuple[int, int, np.ndarray]] = []

    def add_var(self, p: Pair, allowed: np.ndarray | None = None) -> int:
        s = self.A.sizes[p]
        mask = np.ones(s, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
        self.var_class.append(p)
        self.allowed.append(mask)
        return len(self.var_class) - 1

    def add_edge(self, t: Triple, v_ij: int, v_ik: int, v_jk: int) -> None:
        if tuple(self.var_class[v] for v in (v_ij, v_ik, v_jk)) != triple_pairs(t):
            raise ValueError("edge constraint variables must sit in the triple's classes")
        self.ternary.append((t, v_ij, v_ik, v_jk))

    def forbid(self, u: int, v: int, forbidden: np.ndarray) -> None:
        """Forbid value pairs ``(x_u, x_v)`` marked in ``forbidden``."""
        self.binary.append((u, v, np.asarray(forbidden, dtype=bool)))

    def _compile(self):
        A = self.A
        nvar = len(self.var_class)
        W = A.words
        base, index = A.packed
        extra_rows = []
        n_base = base.shape[0]
        con_lists: list[list[tuple[int, int, int, int]]] = [[] for _ in range(nvar)]
        for t, vij, vik, vjk in self.ternary:
            last = max(vij, vik, vjk)
            if last == vjk:
                off, stride = index[(t, Orientation.LEFT)]
                con_lists[last].append((off, stride, vij, vik))
            elif last == vik:
                off, stride = index[(t, Orientation.MIDDLE)]
                con_lists[last].append((off, stride, vij, vjk))
            else:
                off, stride = index[(t, Orientation.RIGHT)]
                con_lists[last].append((off, stride, vik, vjk))
        bin_lists: list[list[tuple[int, int]]] = [[] for _ in range(nvar)]
        extra_count = 0
        for u, v, forbidden in self.binary:
            if u > v:
                u, v, forbidden = v, u, forbidden.T
            rows = kernels.pack_bits(~forbidden, W)
            bin_lists[v].append((n_base + extra_count, u))
            extra_rows.append(rows)
            extra_count += rows.shape[0]
        tables = base if not extra_rows else np.ascontiguousarray(np.concatenate([base] + extra_rows, axis=0))
        con_ptr = np.zeros(nvar + 1, dtype=np.int64)
        flat = []
        for v in range(nvar):
            flat.extend(con_lists[v])
            con_ptr[v + 1] = len(flat)
        con = np.array(flat, dtype=np.int64).reshape(-1, 4)
        bin_ptr = np.zeros(nvar + 1, dtype=np.int64)
        bflat = []
        for v in range(nvar):
            bflat.extend(bin_lists[v])
            bin_ptr[v + 1] = len(bflat)
        bins = np.array(bflat, dtype=np.int64).reshape(-1, 2)
        allowed = np.zeros((nvar, W), dtype=np.uint64)
        for v, mask in enumerate(self.allowed):
            allowed[v] = kernels.pack_bits(mask, W)
        dsize = np.array([A.sizes[p] for p in self.var_class], dtype=np.int64)
        return (nvar, dsize, allowed, tables, con_ptr,
                np.ascontiguousarray(con[:, 0]), np.ascontiguousarray(con[:, 1]),
                np.ascontiguousarray(con[:, 2]), np.ascontiguousarray(con[:, 3]),
                bin_ptr, np.ascontiguousarray(bins[:, 0]), np.ascontiguousarray(bins[:, 1]))

    def solve(self, budget: int = -1) -> tuple[int, list[int] | None, int]:
        if any(s == 0 for s in (self.A.sizes[p] for p in self.var_class)):
            return kernels.ABSENT, None, 0
        args = self._compile()
        status, vals, nodes = kernels.csp_search(*args, budget)
        return int(status), ([int(x) for x in vals] if status == kernels.FOUND else None), int(nodes)

    def solve_naive(self, budget: int = -1) -> tuple[int, list[int] | None, int]:
        if self.binary:
            raise NotImplementedError("the naive kernel handles edge constraints only")
        A = self.A
        nvar = len(self.var_class)
        if any(A.sizes[p] == 0 for p in self.var_class):
            return kernels.ABSENT, None, 0
        trip_ids: dict[Triple, int] = {}
        member, offs, s1, s2 = [], [], [], []
        off = 0
        for t, *_ in self.ternary:
            if t in trip_ids:
                continue
            E = A.edges[t]
            trip_ids[t] = len(offs)
            offs.append(off)
            s1.append(E.shape[1] * E.shape[2])
            s2.append(E.shape[2])
            member.append(E.ravel().astype(np.uint8))
            off += E.size
        checks: list[list[tuple[int, int, int, int]]] = [[] for _ in range(nvar)]
        for t, vij, vik, vjk in self.ternary:
            checks[max(vij, vik, vjk)].append((trip_ids[t], vij, vik, vjk))
        chk_ptr = np.zeros(nvar + 1, dtype=np.int64)
        flat = []
        for v in range(nvar):
            flat.extend(checks[v])
            chk_ptr[v + 1] = len(flat)
        chk = np.array(flat, dtype=np.int64).reshape(-1, 4)
        maxd = max((A.sizes[p] for p in self.var_class), default=1)
        allowed = np.zeros((nvar, maxd), dtype=np.uint8)
        for v, mask in enumerate(self.allowed):
            allowed[v, : mask.size] = mask
        status, vals, nodes = kernels.naive_search(
            nvar,
            np.array([A.sizes[p] for p in self.var_class], dtype=np.int64),
            allowed,
            np.concatenate(member) if member else np.zeros(1, dtype=np.uint8),
            np.array(offs or [0], dtype=np.int64),
            np.array(s1 or [0], dtype=np.int64),
            np.array(s2 or [0], dtype=np.int64),
            chk_ptr,
            *(np.ascontiguousarray(chk[:, c]) for c in range(4)),
            budget,
        )
        return int(status), ([int(x) for x in vals] if status == kernels.FOUND else None), int(nodes)


def clique_csp(A: ReducedHypergraph, J: Sequence[int], allowed: Mapping[Pair, np.ndarray] | None = None
               ) -> tuple[VertexCSP, list[Pair]]:
    """Variables for every pair of ``J`` (lexicographic) and edge constraints for every triple."""
    csp = VertexCSP(A)
    var = {}
    pairs = list(combinations(sorted(J), 2))
    for p in pairs:
        var[p] = csp.add_var(p, None if allowed is None else allowed.get(p))
    for t in combinations(sorted(J), 3):
        csp.add_edge(t, *(var[p] for p in triple_pairs(t)))
    return csp, pairs


def _budget_left(budget: int | None, used: int) -> int:
    return -1 if budget is None else max(budget - used, 0)


def supports_clique(A: ReducedHypergraph, ell: int, budget: int | None = None) -> Certificate:
    """Does ``A`` support ``K_ell^(3)``?

    Index subsets are tried in lexicographic order and, within one, vertices in
    class order; the first witness wins.  ``budget`` caps the total number of
    search nodes.
    """
    if ell > len(A.indices):
        raise ValueError(f"cannot support K_{ell} on {len(A.indices)} indices")
    if ell < 3:
        raise ValueError("clique size must be at least 3")
    used = 0
    for J in combinations(A.indices, ell):
        csp, pairs = clique_csp(A, J)
        remaining = _budget_left(budget, used)
        if budget is not None and remaining == 0:
            return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, details={"nodes": used})
        status, vals, nodes = csp.solve(remaining)
        used += nodes
        if status == kernels.FOUND:
            witness = {"J": list(J), "transversal": Transversal.on_set(J, dict(zip(pairs, vals)))}
            return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, witness, details={"nodes": used})
        if status == kernels.BUDGET:
            return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, details={"nodes": used})
    return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, None, details={"nodes": used})


def check_clique_witness(A: ReducedHypergraph, J: Sequence[int], T: Transversal) -> bool:
    """Every triple of ``J`` spans a constituent edge under ``T``."""
    return all(A.is_edge(t, *(T[p] for p in triple_pairs(t))) for t in combinations(sorted(J), 3))


def is_wicked(A: ReducedHypergraph, eps: Fraction | float, budget: int | None = None) -> bool | None:
    """``(1/3 + eps, ee)``-dense and no supported ``K_5``; ``None`` when the search ran out of budget."""
    eps = Fraction(eps)
    if min_ee_density(A).value < Fraction(1, 3) + eps:
        return False
    if len(A.indices) < 5:
        return True
    cert = supports_clique(A, 5, budget)
    if cert.verdict == Verdict.PASSED_BUDGET:
        return None
    return cert.verdict == Verdict.REFUTED


# -- transversals and cherries -------------------------------------------------------


def _cherries_of(domain: set[Pair]) -> list[tuple[Triple, Orientation, Pair, Pair]]:
    """All cherries (two domain pairs sharing one index) with their triple and orientation."""
    out = []
    for p1, p2 in combinations(sorted(domain), 2):
        shared = set(p1) & set(p2)
        if len(shared) != 1:
            continue
        t = tuple(sorted(set(p1) | set(p2)))
        pairs = triple_pairs(t)
        r1, r2 = sorted((pairs.index(p1), pairs.index(p2)))
        o = {(0, 1): Orientation.LEFT, (0, 2): Orientation.MIDDLE, (1, 2): Orientation.RIGHT}[(r1, r2)]
        out.append((t, o, pairs[r1], pairs[r2]))
    return out


def avoids(T: Transversal, C: CherrySet, A: ReducedHypergraph | None = None) -> bool:
    """True iff no cherry selected by ``T`` lies in ``C``."""
    if A is not None:
        C.check_against(A)
        T.validate(A)
    for t, o, p1, p2 in _cherries_of(T.domain()):
        if o != C.orientation or t not in C.sets:
            continue
        M = C.sets[t]
        a, b = T[p1], T[p2]
        if a >= M.shape[0] or b >= M.shape[1]:
            raise ValueError(f"transversal vertex outside the cherry matrix of {t}")
        if M[a, b]:
            return False
    return True


def find_inhabited_triple(A: ReducedHypergraph, J: Sequence[int] | None = None, *,
                          K: Sequence[int] | None = None, L: Sequence[int] | None = None,
                          M: Sequence[int] | None = None, avoid: Sequence[CherrySet] = (),
                          budget: int | None = None) -> Certificate:
    """Search for transversals ``Q, R, S`` with every aligned triple an edge.

    ``J``-form: ``Q^{ij} R^{ik} S^{jk}`` is an edge for all ``i < j < k`` in ``J``.
    Partite form (``K, L, M``): ``Q^{kl} R^{km} S^{lm}`` is an edge for every
    ``(k, l, m)`` in ``K x L x M``.  Each transversal must avoid every cherry set
    in ``avoid``.
    """
    for C in avoid:
        C.check_against(A)
    csp = VertexCSP(A)
    if J is not None:
        if K is not None or L is not None or M is not None:
            raise ValueError("give either J or K, L, M")
        J = sorted(J)
        if len(J) < 3 or not set(J) <= set(A.indices):
            raise ValueError("J must be a subset of the index set with at least 3 indices")
        domains = [list(combinations(J, 2))] * 3
        var = [{}, {}, {}]
        for p in domains[0]:
            for r in range(3):
                var[r][p] = csp.add_var(p)
        for t in combinations(J, 3):
            pij, pik, pjk = triple_pairs(t)
            csp.add_edge(t, var[0][pij], var[1][pik], var[2][pjk])
        kinds = ["J", "J", "J"]
    else:
        if K is None or L is None or M is None:
            raise ValueError("give either J or all of K, L, M")
        sets = [set(K), set(L), set(M)]
        if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
            raise ValueError("K, L, M must be pairwise disjoint")
        if not (sets[0] | sets[1] | sets[2]) <= set(A.indices):
            raise ValueError("K, L, M must lie in the index set")
        K, L, M = sorted(K), sorted(L), sorted(M)
        domains = [[pair(k, l) for k in K for l in L], [pair(k, m) for k in K for m in M],
                   [pair(l, m) for l in L for m in M]]
        var = [{}, {}, {}]
        for r in range(3):
            for p in domains[r]:
                var[r][p] = csp.add_var(p)
        for k in K:
            for l in L:
                for m in M:
                    t = tuple(sorted((k, l, m)))
                    chosen = {pair(k, l): var[0][pair(k, l)], pair(k, m): var[1][pair(k, m)],
                              pair(l, m): var[2][pair(l, m)]}
                    csp.add_edge(t, *(chosen[p] for p in triple_pairs(t)))
        kinds = ["cross", "cross", "cross"]
    for r in range(3):
        for t, o, p1, p2 in _cherries_of(set(domains[r])):
            for C in avoid:
                if C.orientation == o and t in C.sets and C.sets[t].any():
                    csp.forbid(var[r][p1], var[r][p2], C.sets[t])
    status, vals, nodes = csp.solve(-1 if budget is None else budget)
    details = {"nodes": nodes}
    if status == kernels.FOUND:
        out = []
        for r in range(3):
            out.append(Transversal({p: vals[var[r][p]] for p in domains[r]}, kinds[r]))
        return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, tuple(out), details=details)
    if status == kernels.ABSENT:
        return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, None, details=details)
    return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, details=details)


def is_inhabited(A: ReducedHypergraph, Q: Transversal, R: Transversal, S: Transversal,
                 J: Sequence[int] | None = None, *, K=None, L=None, M=None) -> bool:
    if J is not None:
        return all(A.is_edge(t, Q[(t[0], t[1])], R[(t[0], t[2])], S[(t[1], t[2])])
                   for t in combinations(sorted(J), 3))
    for k in K:
        for l in L:
            for m in M:
                t = tuple(sorted((k, l, m)))
                chosen = {pair(k, l): Q[(k, l)], pair(k, m): R[(k, m)], pair(l, m): S[(l, m)]}
                if not A.is_edge(t, *(chosen[p] for p in triple_pairs(t))):
                    return False
    return True


# -- bicolourings ----------------------------------------------------------------------


def validate_bicolouring(A: ReducedHypergraph, phi: Bicolouring) -> bool:
    """Both colours in every class and no monochromatic constituent edge."""
    phi.check_total(A)
    for p in A.sizes:
        if not phi.red(p).any() or not phi.blue(p).any():
            return False
    for t, E in A.edges.items():
        pij, pik, pjk = triple_pairs(t)
        for col in (RED, BLUE):
            mono = (phi.colour[pij] == col)[:, None, None] & (phi.colour[pik] == col)[None, :, None] \
                & (phi.colour[pjk] == col)[None, None, :]
            if np.any(E & mono):
                return False
    return True


def monochromatic_edge(A: ReducedHypergraph, phi: Bicolouring) -> tuple[Triple, int, int, int] | None:
    for t, E in A.edges.items():
        pij, pik, pjk = triple_pairs(t)
        for col in (RED, BLUE):
            mono = (phi.colour[pij] == col)[:, None, None] & (phi.colour[pik] == col)[None, :, None] \
                & (phi.colour[pjk] == col)[None, None, :]
            hits = np.argwhere(E & mono)
            if len(hits):
                a, b, c = hits[0]
                return t, int(a), int(b), int(c)
    return None


def tau2(A: ReducedHypergraph, phi: Bicolouring) -> Fraction | None:
    """Minimum codegree ratio over same-coloured cherries, in every orientation.

    ``None`` when no same-coloured cherry exists.
    """
    phi.check_total(A)
    best: Fraction | None = None
    for t in A.edges:
        for o in Orientation:
            p1, p2, p3 = orientation_classes(t, o)
            N = A.cherry_table(t, o)
            if N.shape[2] == 0:
                continue
            deg = N.sum(axis=2)
            same = phi.colour[p1][:, None] == phi.colour[p2][None, :]
            if not same.any():
                continue
            val = Fraction(int(deg[same].min()), N.shape[2])
            if best is None or val < best:
                best = val
    return best
