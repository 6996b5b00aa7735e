"""Explicit constructions: the mod-3 hypergraph, the Ramsey-colouring hypergraph,
their reduced analogues, and random preimages of reduced hypergraphs.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``; the same
seed gives the same object on every platform.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, comb
from typing import Iterator, Mapping, Sequence

import numpy as np

from turanforge.hypercore import Hypergraph3, all_triples
from turanforge.reduced import BLUE, RED, Bicolouring, Orientation, ReducedHypergraph, triple_pairs


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


class PairMap:
    """Symmetric map from unordered pairs of ``0..n-1`` into ``{0, ..., r-1}``."""

    def __init__(self, n: int, r: int, values: np.ndarray | Mapping[tuple[int, int], int]):
        if n < 0 or r < 1:
            raise ValueError("need n >= 0 and r >= 1")
        iu = _upper(n)
        if isinstance(values, Mapping):
            vec = np.full(len(iu[0]), -1, dtype=np.int64)
            pos = pair_index(n)
            for (i, j), v in values.items():
                if i == j:
                    raise ValueError("pair maps are defined on distinct pairs only")
                vec[pos[i, j]] = v
            if np.any(vec < 0):
                raise ValueError(f"pair map must define all {comb(n, 2)} pairs")
        else:
            arr = np.asarray(values, dtype=np.int64)
            if arr.shape == (len(iu[0]),):
                vec = arr
            elif arr.shape == (n, n):
                if not np.array_equal(arr, arr.T):
                    raise ValueError("pair map matrix must be symmetric")
                vec = arr[iu]
            else:
                raise ValueError("values must be a length-C(n,2) vector or an n x n matrix")
        if vec.size and (vec.min() < 0 or vec.max() >= r):
            raise ValueError(f"pair values must lie in 0..{r - 1}")
        M = np.zeros((n, n), dtype=np.int64)
        M[iu] = vec
        M.T[iu] = vec
        M.setflags(write=False)
        self.n, self.r, self.matrix = n, r, M

    def __call__(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("pair maps are defined on distinct pairs only")
        return int(self.matrix[i, j])

    def vector(self) -> np.ndarray:
        """Values of all pairs in lexicographic pair order."""
        return self.matrix[_upper(self.n)].copy()

    def restrict(self, S: Sequence[int]) -> "PairMap":
        idx = np.asarray(S, dtype=np.int64)
        return PairMap(len(S), self.r, self.matrix[np.ix_(idx, idx)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairMap):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.matrix, other.matrix)

    def __repr__(self) -> str:
        return f"PairMap(n={self.n}, r={self.r})"


@lru_cache(maxsize=64)
def _upper(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


@lru_cache(maxsize=64)
def _triples(n: int) -> np.ndarray:
    t = all_triples(n)
    t.setflags(write=False)
    return t


def psi_hypergraph(psi: PairMap) -> Hypergraph3:
    """``xyz`` is an edge iff ``psi(xy) + psi(xz) + psi(yz) = 1 (mod 3)``."""
    if psi.r != 3:
        raise ValueError(f"the mod-3 construction needs r = 3 (got r={psi.r})")
    t = _triples(psi.n)
    M = psi.matrix
    if len(t) == 0:
        return Hypergraph3(psi.n)
    s = M[t[:, 0], t[:, 1]] + M[t[:, 0], t[:, 2]] + M[t[:, 1], t[:, 2]]
    return Hypergraph3.from_triples_mask(psi.n, t, s % 3 == 1)


def ramsey_hypergraph(phi: PairMap) -> Hypergraph3:
    """``xyz`` is an edge iff its three pairs are not all the same colour."""
    t = _triples(phi.n)
    if len(t) == 0:
        return Hypergraph3(phi.n)
    M = phi.matrix
    a, b, c = M[t[:, 0], t[:, 1]], M[t[:, 0], t[:, 2]], M[t[:, 1], t[:, 2]]
    return Hypergraph3.from_triples_mask(phi.n, t, ~((a == b) & (b == c)))


def random_pairmap(n: int, r: int, seed: int) -> PairMap:
    """Each pair value i.i.d. uniform on ``0..r-1``."""
    if n < 1 or r < 2:
        raise ValueError("need n >= 1 and r >= 2")
    return PairMap(n, r, rng(seed).integers(0, r, size=comb(n, 2)))


def all_pairmaps(n: int, r: int) -> Iterator[PairMap]:
    """Every map on ``n`` vertices, in lexicographic order of the value vector."""
    for values in all_value_vectors(n, r):
        yield PairMap(n, r, values)


def all_value_vectors(n: int, r: int) -> np.ndarray:
    """``(r^C(n,2), C(n,2))`` array of every value vector, same order as :func:`all_pairmaps`."""
    m = comb(n, 2)
    codes = np.arange(r ** m, dtype=np.int64)
    powers = r ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers) % r


def pair_index(n: int) -> np.ndarray:
    """``idx[i, j]`` = position of pair ``{i, j}`` in lexicographic pair order."""
    idx = np.full((n, n), -1, dtype=np.int64)
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        idx[i, j] = idx[j, i] = k
    return idx


# -- reduced constructions ----------------------------------------------------------


def mod3_labels(indices: Sequence[int], class_size: int, randomized: bool = False,
                seed: int = 0) -> dict[tuple[int, int], np.ndarray]:
    """Residue label of every reduced vertex: three equal blocks ``0, 1, 2`` per class.

    With ``randomized`` the balanced labels are shuffled inside each class.
    """
    if class_size < 3 or class_size % 3:
        raise ValueError(f"class size must be a positive multiple of 3 (got {class_size})")
    base = np.repeat(np.arange(3, dtype=np.int64), class_size // 3)
    gen = rng(seed)
    labels = {}
    for p in combinations(sorted(indices), 2):
        labels[p] = gen.permutation(base) if randomized else base.copy()
    return labels


def reduced_from_labels(indices: Sequence[int], labels: Mapping[tuple[int, int], np.ndarray]) -> ReducedHypergraph:
    """Constituent edge iff the three residue labels sum to 1 mod 3."""
    idx = sorted(indices)
    sizes = {p: len(labels[p]) for p in combinations(idx, 2)}
    cons = {}
    for t in combinations(idx, 3):
        pij, pik, pjk = triple_pairs(t)
        s = labels[pij][:, None, None] + labels[pik][None, :, None] + labels[pjk][None, None, :]
        cons[t] = s % 3 == 1
    return ReducedHypergraph(idx, sizes, cons)


def mod3_reduced(indices: Sequence[int] | int, class_size: int, randomized: bool = False,
                 seed: int = 0) -> ReducedHypergraph:
    """Reduced version of the mod-3 construction (an integer means ``range(indices)``)."""
    idx = list(range(indices)) if isinstance(indices, int) else sorted(indices)
    if len(idx) < 3:
        raise ValueError("need at least three indices")
    return reduced_from_labels(idx, mod3_labels(idx, class_size, randomized, seed))


def random_preimage(A: ReducedHypergraph, ell: int, seed: int
                    ) -> tuple[ReducedHypergraph, dict[tuple[int, int], np.ndarray]]:
    """Random preimage with ``ell`` vertices per class and its homomorphism ``h``.

    ``h[p][x]`` is the image in ``P^p`` of new vertex ``x``; edges are pulled back.
    """
    if ell < 1:
        raise ValueError("preimage classes need ell >= 1")
    for p, s in A.sizes.items():
        if s == 0:
            raise ValueError(f"cannot map into empty class {p}")
    gen = rng(seed)
    h = {p: gen.integers(0, s, size=ell) for p, s in A.sizes.items()}
    cons = {}
    for t, E in A.edges.items():
        pij, pik, pjk = triple_pairs(t)
        cons[t] = E[np.ix_(h[pij], h[pik], h[pjk])]
    return ReducedHypergraph(A.indices, {p: ell for p in A.sizes}, cons), h


def is_homomorphism(A_h: ReducedHypergraph, A: ReducedHypergraph, h: Mapping[tuple[int, int], np.ndarray]) -> bool:
    for t, E in A_h.edges.items():
        pij, pik, pjk = triple_pairs(t)
        a, b, c = np.nonzero(E)
        if not np.all(A.edges[t][h[pij][a], h[pik][b], h[pjk][c]]):
            return False
    return True


# -- bicoloured instances ----------------------------------------------------------------


def nonmonochromatic_complete(indices: Sequence[int] | int, class_size: int = 2
                              ) -> tuple[ReducedHypergraph, Bicolouring]:
    """Every non-monochromatic triple is an edge.

    Classes of size ``s`` hold ``s // 2`` red vertices then the blue ones.
    """
    idx = list(range(indices)) if isinstance(indices, int) else sorted(indices)
    if class_size < 2:
        raise ValueError("each class needs both colours")
    col = np.array([RED] * (class_size // 2) + [BLUE] * (class_size - class_size // 2), dtype=np.int8)
    colours = {p: col.copy() for p in combinations(idx, 2)}
    return _nonmono_from_colours(idx, colours)


def _nonmono_from_colours(idx, colours):
    cons = {}
    for t in combinations(idx, 3):
        pij, pik, pjk = triple_pairs(t)
        a = colours[pij][:, None, None]
        b = colours[pik][None, :, None]
        c = colours[pjk][None, None, :]
        cons[t] = ~((a == b) & (b == c))
    sizes = {p: len(c) for p, c in colours.items()}
    return ReducedHypergraph(idx, sizes, cons), Bicolouring(colours)


def random_bicoloured(indices: Sequence[int] | int, class_size: int, tau: Fraction | float,
                      seed: int, deletion_attempts: int | None = None
                      ) -> tuple[ReducedHypergraph, Bicolouring]:
    """Random bicoloured instance whose same-colour codegree ratio stays at least ``tau``.

    Each class gets a random number of blue vertices leaving both colours at
    least ``tau`` of the class; all non-monochromatic triples start as edges;
    then random edges are proposed for deletion and a proposal is rejected if
    it would drop some same-coloured cherry below ``tau``.
    """
    idx = list(range(indices)) if isinstance(indices, int) else sorted(indices)
    tau = Fraction(tau)
    gen = rng(seed)
    lo = ceil(tau * class_size)
    if 2 * lo > class_size:
        raise ValueError(f"class size {class_size} cannot hold both colours at ratio {tau}")
    colours = {}
    for p in combinations(idx, 2):
        blue = int(gen.integers(lo, class_size - lo + 1))
        c = np.array([BLUE] * blue + [RED] * (class_size - blue), dtype=np.int8)
        colours[p] = gen.permutation(c)
    A, phi = _nonmono_from_colours(idx, colours)
    cons = {t: E.copy() for t, E in A.edges.items()}
    deg = {(t, o): A.cherry_table(t, o).sum(axis=2) for t in cons for o in Orientation}
    need = ceil(tau * class_size)
    triples = list(cons)
    attempts = deletion_attempts if deletion_attempts is not None else sum(int(E.sum()) for E in cons.values())
    for _ in range(attempts):
        t = triples[int(gen.integers(len(triples)))]
        E = cons[t]
        a, b, c = (int(x) for x in gen.integers(0, class_size, size=3))
        if not E[a, b, c]:
            continue
        pij, pik, pjk = triple_pairs(t)
        ca, cb, cc = colours[pij][a], colours[pik][b], colours[pjk][c]
        cherries = ((Orientation.LEFT, (a, b), ca == cb), (Orientation.MIDDLE, (a, c), ca == cc),
                    (Orientation.RIGHT, (b, c), cb == cc))
        if any(same and deg[(t, o)][xy] - 1 < need for o, xy, same in cherries):
            continue
        E[a, b, c] = False
        for o, xy, _ in cherries:
            deg[(t, o)][xy] -= 1
    return ReducedHypergraph(idx, A.sizes, cons), phi


def random_reduced(indices: Sequence[int] | int, class_sizes: int | tuple[int, int], density: Fraction | float,
                   seed: int) -> ReducedHypergraph:
    """Random reduced hypergraph: each constituent triple is an edge independently with probability ``density``.

    ``class_sizes`` is a fixed size or an inclusive range ``(lo, hi)`` drawn per pair.
    """
    idx = list(range(indices)) if isinstance(indices, int) else sorted(indices)
    gen = rng(seed)
    lo, hi = (class_sizes, class_sizes) if isinstance(class_sizes, int) else class_sizes
    if not 1 <= lo <= hi:
        raise ValueError("class sizes must satisfy 1 <= lo <= hi")
    p = float(density)
    if not 0 <= p <= 1:
        raise ValueError("density must lie in [0, 1]")
    sizes = {q: int(gen.integers(lo, hi + 1)) for q in combinations(idx, 2)}
    cons = {}
    for t in combinations(idx, 3):
        shape = tuple(sizes[q] for q in triple_pairs(t))
        cons[t] = gen.random(shape) < p
    return ReducedHypergraph(idx, sizes, cons)
