"""3-uniform hypergraphs on ``0..n-1`` with pair-indexed bitset adjacency."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from turanforge import kernels
from turanforge.certificate import Certificate, Method, Verdict


class Hypergraph3:
    """Immutable 3-graph.

    ``edges`` is an ``(m, 3)`` array of sorted triples in lexicographic order;
    ``adj[x, y]`` is the packed bitset of all ``z`` with ``{x, y, z}`` an edge
    (symmetric in ``x, y``; empty when ``x == y``).
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arr = np.array([sorted(e) for e in edges], dtype=np.int64).reshape(-1, 3)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError(f"edge vertex out of range 0..{n - 1}")
            if np.any(arr[:, 0] == arr[:, 1]) or np.any(arr[:, 1] == arr[:, 2]):
                raise ValueError("an edge needs three distinct vertices")
            arr = np.unique(arr, axis=0)
        self.n = n
        self.edges = arr
        self.edges.setflags(write=False)

    @classmethod
    def from_triples_mask(cls, n: int, triples: np.ndarray, mask: np.ndarray) -> "Hypergraph3":
        """Build from all sorted triples ``triples`` (lexicographic) and a keep-mask."""
        obj = cls.__new__(cls)
        obj.n = n
        obj.edges = np.ascontiguousarray(triples[np.asarray(mask, dtype=bool)], dtype=np.int64)
        obj.edges.setflags(write=False)
        return obj

    @classmethod
    def complete(cls, n: int) -> "Hypergraph3":
        t = all_triples(n)
        return cls.from_triples_mask(n, t, np.ones(len(t), dtype=bool))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def tensor(self) -> np.ndarray:
        """Dense ``(n, n, n)`` boolean membership, symmetric in all axes."""
        T = np.zeros((self.n, self.n, self.n), dtype=bool)
        if self.m:
            a, b, c = self.edges.T
            for x, y, z in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
                T[x, y, z] = True
        T.setflags(write=False)
        return T

    @cached_property
    def adj(self) -> np.ndarray:
        packed = kernels.build_pair_adjacency(self.edges, self.n, kernels.words_for(self.n))
        packed.setflags(write=False)
        return packed

    def has_edge(self, x: int, y: int, z: int) -> bool:
        if len({x, y, z}) < 3:
            return False
        return bool(self.tensor[x, y, z])

    def pair_neighbours(self, x: int, y: int) -> np.ndarray:
        return np.flatnonzero(self.tensor[x, y])

    def edge_set(self) -> set[tuple[int, int, int]]:
        return {tuple(int(v) for v in e) for e in self.edges}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Hypergraph3(n={self.n}, m={self.m})"


class Graph:
    """Immutable simple graph given by a symmetric boolean adjacency matrix."""

    def __init__(self, adjacency: np.ndarray):
        A = np.array(adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(np.diag(A)):
            raise ValueError("graphs have no loops")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency must be symmetric")
        A.setflags(write=False)
        self.matrix = A

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        A = np.zeros((n, n), dtype=bool)
        for x, y in edges:
            if x == y:
                raise ValueError("graphs have no loops")
            A[x, y] = A[y, x] = True
        return cls(A)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def m(self) -> int:
        return int(self.matrix.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        xs, ys = np.nonzero(np.triu(self.matrix, 1))
        return [(int(x), int(y)) for x, y in zip(xs, ys)]

    def edges_inside(self, X: Iterable[int]) -> int:
        idx = np.fromiter(sorted(set(X)), dtype=np.int64)
        if idx.size == 0:
            return 0
        return int(self.matrix[np.ix_(idx, idx)].sum()) // 2

    def adjmask(self) -> np.ndarray:
        """Row ``v`` as a python-int bitmask (only for ``n <= 62``)."""
        if self.n > 62:
            raise ValueError("bitmask rows need n <= 62")
        weights = 1 << np.arange(self.n, dtype=np.int64)
        return (self.matrix.astype(np.int64) * weights).sum(axis=1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def all_triples(n: int) -> np.ndarray:
    """All 3-subsets of ``range(n)`` as sorted rows in lexicographic order."""
    if n < 3:
        return np.zeros((0, 3), dtype=np.int64)
    return np.array(list(combinations(range(n), 3)), dtype=np.int64)


def _check_vertex(H: Hypergraph3, x: int) -> None:
    if not 0 <= x < H.n:
        raise ValueError(f"vertex {x} out of range 0..{H.n - 1}")


def link_graph(H: Hypergraph3, x: int) -> Graph:
    """Link of ``x``: graph on ``V(H)`` with ``yz`` an edge iff ``xyz`` is a hyperedge."""
    _check_vertex(H, x)
    return Graph(H.tensor[x])


def contains_clique(H: Hypergraph3, ell: int, budget: int | None = None) -> Certificate:
    """Search for ``K_ell^(3)``; the witness is the lexicographically first clique.

    Verdict ``CERTIFIED`` means a clique was found, ``REFUTED`` that the search
    space was exhausted, ``PASSED_BUDGET`` that ``budget`` nodes ran out first.
    """
    if ell < 3 or ell > H.n:
        raise ValueError(f"clique size must satisfy 3 <= ell <= n (got ell={ell}, n={H.n})")
    status, verts, nodes = kernels.clique_search(H.adj, H.n, ell, -1 if budget is None else budget)
    details = {"nodes": int(nodes)}
    if status == kernels.FOUND:
        return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, tuple(int(v) for v in verts), details=details)
    if status == kernels.ABSENT:
        return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, None, details=details)
    return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, details=details)


def is_clique(H: Hypergraph3, S: Sequence[int]) -> bool:
    return len(set(S)) == len(S) and all(H.has_edge(*t) for t in combinations(S, 3))


def edge_density(H: Hypergraph3) -> Fraction:
    if H.n < 3:
        raise ValueError("edge density needs n >= 3")
    return Fraction(H.m, comb(H.n, 3))


def induced(H: Hypergraph3, S: Sequence[int]) -> Hypergraph3:
    """Sub-hypergraph on ``S``; vertex ``S[i]`` becomes ``i``."""
    S = [int(v) for v in S]
    if len(set(S)) != len(S):
        raise ValueError("induced() needs distinct vertices")
    for v in S:
        _check_vertex(H, v)
    if len(S) < 3:
        return Hypergraph3(len(S))
    idx = np.array(S, dtype=np.int64)
    sub = H.tensor[np.ix_(idx, idx, idx)]
    t = all_triples(len(S))
    return Hypergraph3.from_triples_mask(len(S), t, sub[t[:, 0], t[:, 1], t[:, 2]])
