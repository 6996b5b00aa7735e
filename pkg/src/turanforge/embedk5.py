"""Constructive K5 embedding in bicoloured reduced hypergraphs, and an exhaustive oracle.

Five indices are labelled ``1..5`` around a pentagon.  Consecutive pairs
(``12, 23, 34, 45, 15``) take blue vertices and diagonals (``13, 24, 35, 14,
25``) red ones; this is the only way to 2-colour the edges of ``K5`` without a
monochromatic triangle, so any supported ``K5`` in a validly bicoloured
hypergraph has this shape for some labelling.

The greedy order is

1. ``r14`` maximising ``|N_{B15 x B45}(r14)|``;
2. ``b34`` maximising ``|N_{R13}(r14, b34)|``, then ``r24`` maximising
   ``|N_{B23}(r24, b34)|``, then ``(b12, r13)`` with ``b12 in N(r14, r24)``,
   ``r13 in N(r14, b34)`` maximising ``|N_{B23}(b12, r13) cap N_{B23}(r24, b34)|``;
3. ``(b15, b45)`` in ``G1 cap G2 cap N(r14)``, then ``r25`` and ``r35`` from the
   intersections that define ``G1`` and ``G2``;
4. ``b23`` in ``N(b12, r13) cap N(r24, b34) cap N(r25, r35)``.

Each step lists its options best-first (ties in class order); on failure the
search backtracks into the next option, so running out of options everywhere
is a proof that no ``K5`` is supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import prod
from typing import Any, Sequence

import numpy as np

from turanforge import kernels
from turanforge.certificate import Certificate, Method, Verdict, as_fraction
from turanforge.errors import CapabilityError
from turanforge.reduced import (
    BLUE,
    RED,
    Bicolouring,
    Pair,
    ReducedHypergraph,
    Transversal,
    clique_csp,
    pair,
    tau2,
    validate_bicolouring,
)

Label = tuple[int, int]

BLUE_LABELS: tuple[Label, ...] = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))
RED_LABELS: tuple[Label, ...] = ((1, 3), (2, 4), (3, 5), (1, 4), (2, 5))
LABEL_TRIPLES = tuple(combinations(range(1, 6), 3))

DEFAULT_BUDGET = 1_000_000


def default_xi(eps) -> Fraction:
    return min(as_fraction(eps) / 4, Fraction(1, 24))


def pentagons(J: Sequence[int]) -> list[dict[int, int]]:
    """The 12 cyclic orders of five indices, as maps ``label -> index``.

    The first index of ``J`` always gets label 1; the two directions around a
    cycle describe the same pentagon, so only one is kept.
    """
    J = list(J)
    if len(J) != 5:
        raise ValueError("a pentagon needs five indices")
    out = []
    for rest in permutations(J[1:]):
        if rest[0] > rest[-1]:
            continue
        out.append(dict(zip(range(1, 6), (J[0],) + rest)))
    return out


def label_colour(a: int, b: int) -> int:
    return BLUE if tuple(sorted((a, b))) in BLUE_LABELS else RED


@dataclass
class EmbeddingWitness:
    """Ten vertices indexed by label pairs, with the pentagon labelling that places them."""

    labels: dict[int, int]
    vertices: dict[Label, int]
    trace: dict[str, Any] = field(default_factory=dict)

    def class_of(self, lab: Label) -> Pair:
        return pair(self.labels[lab[0]], self.labels[lab[1]])

    @property
    def J(self) -> list[int]:
        return sorted(self.labels.values())

    def transversal(self) -> Transversal:
        return Transversal.on_set(self.J, {self.class_of(l): v for l, v in self.vertices.items()})

    def validate(self, A: ReducedHypergraph, phi: Bicolouring | None = None) -> bool:
        """All ten triples are edges and, given ``phi``, the colours follow the pentagon."""
        T = self.transversal()
        for t in combinations(self.J, 3):
            if not A.is_edge(t, T[(t[0], t[1])], T[(t[0], t[2])], T[(t[1], t[2])]):
                return False
        if phi is not None:
            for lab, v in self.vertices.items():
                if int(phi.colour[self.class_of(lab)][v]) != label_colour(*lab):
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            "J": self.J,
            "labels": {str(k): v for k, v in self.labels.items()},
            "vertices": {f"{'b' if label_colour(*l) == BLUE else 'r'}{l[0]}{l[1]}":
                         {"class": list(self.class_of(l)), "vertex": v} for l, v in sorted(self.vertices.items())},
            "trace": self.trace,
        }


class _Budget(Exception):
    pass


class _Pentagon:
    """Neighbourhood queries on one labelled 5-subset, with colours applied."""

    def __init__(self, A: ReducedHypergraph, phi: Bicolouring, labels: dict[int, int]):
        self.A, self.phi, self.labels = A, phi, labels

    def cls(self, lab: Label) -> Pair:
        return pair(self.labels[lab[0]], self.labels[lab[1]])

    def colour_mask(self, lab: Label) -> np.ndarray:
        c = self.phi.colour[self.cls(lab)]
        return c == label_colour(*lab)

    def nbr(self, lu: Label, x: int, lv: Label, y: int) -> np.ndarray:
        """Mask over the third class of the triple ``lu cup lv``, restricted to its pentagon colour."""
        third = tuple(sorted(set(lu) ^ set(lv)))
        m = self.A.nbr((self.cls(lu), x), (self.cls(lv), y))
        return m & self.colour_mask(third)

    def pair_nbr(self, lx: Label, x: int, lu: Label, lv: Label) -> np.ndarray:
        M = self.A.pair_nbr((self.cls(lx), x), self.cls(lu), self.cls(lv))
        return M & self.colour_mask(lu)[:, None] & self.colour_mask(lv)[None, :]


def _best_first(scores: np.ndarray, pool: np.ndarray) -> list[int]:
    """Indices of ``pool`` with positive score, highest score first, ties in class order."""
    idx = np.flatnonzero(pool & (scores > 0))
    return [int(i) for i in idx[np.argsort(-scores[idx], kind="stable")]]


class _Search:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.nodes = 0
        self.backtracks = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget

    def run(self, P: _Pentagon) -> tuple[dict[Label, int], dict] | None:
        red14 = P.colour_mask((1, 4))
        blue = {l: P.colour_mask(l) for l in BLUE_LABELS}
        red = {l: P.colour_mask(l) for l in RED_LABELS}
        s14 = np.array([P.pair_nbr((1, 4), r, (1, 5), (4, 5)).sum() if red14[r] else 0
                        for r in range(red14.size)])
        first = True
        for r14 in _best_first(s14, red14):
            self.tick()
            if not first:
                self.backtracks += 1
            first = False
            found = self._after_r14(P, r14, blue, red, {"r14": int(s14[r14])})
            if found is not None:
                return found
        return None

    def _after_r14(self, P, r14, blue, red, trace):
        s34 = np.array([P.nbr((1, 4), r14, (3, 4), b).sum() if blue[(3, 4)][b] else 0
                        for b in range(blue[(3, 4)].size)])
        first = True
        for b34 in _best_first(s34, blue[(3, 4)]):
            self.tick()
            if not first:
                self.backtracks += 1
            first = False
            n13 = P.nbr((1, 4), r14, (3, 4), b34)
            s24 = np.array([P.nbr((2, 4), r, (3, 4), b34).sum() if red[(2, 4)][r] else 0
                            for r in range(red[(2, 4)].size)])
            first24 = True
            for r24 in _best_first(s24, red[(2, 4)]):
                self.tick()
                if not first24:
                    self.backtracks += 1
                first24 = False
                n12 = P.nbr((1, 4), r14, (2, 4), r24)
                if not n12.any():
                    continue
                base23 = P.nbr((2, 4), r24, (3, 4), b34)
                t = dict(trace, b34=int(s34[b34]), r24=int(s24[r24]))
                found = self._inner_four(P, r14, b34, r24, n12, n13, base23, blue, red, t)
                if found is not None:
                    return found
        return None

    def _inner_four(self, P, r14, b34, r24, n12, n13, base23, blue, red, trace):
        opts = []
        for b12 in np.flatnonzero(n12):
            for r13 in np.flatnonzero(n13):
                sc = int((P.nbr((1, 2), int(b12), (1, 3), int(r13)) & base23).sum())
                if sc > 0:
                    opts.append((-sc, int(b12), int(r13)))
        opts.sort()
        first = True
        for neg, b12, r13 in opts:
            self.tick()
            if not first:
                self.backtracks += 1
            first = False
            core23 = P.nbr((1, 2), b12, (1, 3), r13) & base23
            t = dict(trace, b12r13=-neg)
            found = self._outer_five(P, {"r14": r14, "b34": b34, "r24": r24, "b12": b12, "r13": r13}, core23, t)
            if found is not None:
                return found
        return None

    def _outer_five(self, P, v, core23, trace):
        M1 = P.pair_nbr((1, 2), v["b12"], (1, 5), (2, 5))   # [B15, R25]
        M2 = P.pair_nbr((2, 4), v["r24"], (4, 5), (2, 5))   # [B45, R25]
        M3 = P.pair_nbr((1, 3), v["r13"], (1, 5), (3, 5))   # [B15, R35]
        M4 = P.pair_nbr((3, 4), v["b34"], (4, 5), (3, 5))   # [B45, R35]
        N14 = P.pair_nbr((1, 4), v["r14"], (1, 5), (4, 5))  # [B15, B45]
        G1 = (M1.astype(np.int64) @ M2.T.astype(np.int64)) > 0
        G2 = (M3.astype(np.int64) @ M4.T.astype(np.int64)) > 0
        cand = G1 & G2 & N14
        trace = dict(trace, G1=int(G1.sum()), G2=int(G2.sum()), N14=int(N14.sum()), G=int(cand.sum()))
        first = True
        for b15, b45 in np.argwhere(cand):
            b15, b45 = int(b15), int(b45)
            self.tick()
            if not first:
                self.backtracks += 1
            first = False
            opts = []
            for r25 in np.flatnonzero(M1[b15] & M2[b45]):
                for r35 in np.flatnonzero(M3[b15] & M4[b45]):
                    fin = core23 & P.nbr((2, 5), int(r25), (3, 5), int(r35))
                    if fin.any():
                        opts.append((-int(fin.sum()), int(r25), int(r35), fin))
            opts.sort(key=lambda o: o[:3])
            if not opts:
                continue
            self.tick()
            neg, r25, r35, fin = opts[0]
            b23 = int(np.flatnonzero(fin)[0])
            verts = {(1, 4): v["r14"], (3, 4): v["b34"], (2, 4): v["r24"], (1, 2): v["b12"],
                     (1, 3): v["r13"], (1, 5): b15, (4, 5): b45, (2, 5): r25, (3, 5): r35, (2, 3): b23}
            return verts, dict(trace, b23=-neg)
        return None


def _parse_order(order) -> tuple[Label, ...] | None:
    if order is None:
        return None
    labs = []
    for x in order:
        lab = tuple(sorted(int(c) for c in x)) if isinstance(x, str) else tuple(sorted(x))
        labs.append(lab)
    if sorted(labs) != sorted(BLUE_LABELS + RED_LABELS):
        raise ValueError("step order must list each of the ten pentagon labels once")
    return tuple(labs)


class _OrderedSearch(_Search):
    """Plain backtracking that fixes the ten labels in a caller-given order."""

    def __init__(self, budget: int | None, order: tuple[Label, ...]):
        super().__init__(budget)
        self.order = order

    def run(self, P: _Pentagon):
        chosen: dict[Label, int] = {}

        def options(lab):
            mask = P.colour_mask(lab).copy()
            for other in chosen:
                if len(set(lab) | set(other)) != 3:
                    continue
                third = tuple(sorted(set(lab) ^ set(other)))
                if third in chosen:
                    # the triple lab+other+third: restrict lab via the other two
                    m = P.A.nbr((P.cls(other), chosen[other]), (P.cls(third), chosen[third]))
                    mask &= m
            return np.flatnonzero(mask)

        def go(k):
            if k == len(self.order):
                return True
            lab = self.order[k]
            first = True
            for x in options(lab):
                self.tick()
                if not first:
                    self.backtracks += 1
                first = False
                chosen[lab] = int(x)
                if go(k + 1):
                    return True
                del chosen[lab]
            return False

        if go(0):
            return dict(chosen), {"order": ["".join(map(str, l)) for l in self.order]}
        return None


def _beta_spread(A: ReducedHypergraph, phi: Bicolouring, J: Sequence[int]) -> tuple[Fraction, Fraction]:
    betas = [Fraction(int(phi.blue(p).sum()), A.sizes[p]) for p in combinations(J, 2)]
    return max(betas) - min(betas), sum(betas, Fraction(0)) / len(betas)


def embed_k5_bicoloured(A: ReducedHypergraph, phi: Bicolouring, eps, xi=None, *,
                        budget: int | None = DEFAULT_BUDGET, enforce_hypothesis: bool = True,
                        order: Sequence[Label | str] | None = None) -> Certificate:
    """Run the pentagon selection procedure on every 5-subset of indices.

    5-subsets are tried by increasing spread of their blue ratios, then
    lexicographically; on each, colours are swapped if blue is the majority,
    and all 12 pentagons are tried.  ``CERTIFIED`` carries an
    :class:`EmbeddingWitness`; ``REFUTED`` means every option was exhausted;
    ``PASSED_BUDGET`` means the node budget ran out, or (with
    ``details["hypothesis"]`` false) that ``tau2 < 1/3 + eps`` so nothing was run.

    ``order`` replaces the structured steps with plain backtracking over the
    ten labels in the given order (e.g. ``["14", "34", ...]``).
    """
    if not validate_bicolouring(A, phi):
        raise ValueError("the colouring is not a valid bicolouring of A")
    if len(A.indices) < 5:
        raise ValueError("embedding K5 needs at least five indices")
    step_order = _parse_order(order)
    eps = as_fraction(eps)
    xi = default_xi(eps) if xi is None else as_fraction(xi)
    t2 = tau2(A, phi)
    hyp = t2 is None or t2 >= Fraction(1, 3) + eps
    details: dict[str, Any] = {"tau2": t2, "eps": eps, "xi": xi, "hypothesis": hyp}
    if not hyp and enforce_hypothesis:
        return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, None, details)
    order = []
    for J in combinations(A.indices, 5):
        spread, mean = _beta_spread(A, phi, J)
        order.append((spread, J, mean))
    order.sort(key=lambda x: (x[0], x[1]))
    search = _Search(budget) if step_order is None else _OrderedSearch(budget, step_order)
    attempts = 0
    try:
        for spread, J, mean in order:
            swapped = mean > Fraction(1, 2)
            colours = phi.swapped() if swapped else phi
            for labels in pentagons(J):
                attempts += 1
                if attempts > 1:
                    search.backtracks += 1
                res = search.run(_Pentagon(A, colours, labels))
                if res is None:
                    continue
                verts, steps = res
                trace = {"J": list(J), "beta_spread": spread, "aligned": spread <= 2 * xi,
                         "swapped": swapped, "steps": steps, "backtracks": search.backtracks,
                         "nodes": search.nodes, "attempts": attempts}
                w = EmbeddingWitness(labels, verts, trace)
                if not w.validate(A, colours):
                    raise AssertionError("selection produced an invalid embedding")
                details.update(trace)
                return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, w, None, details)
    except _Budget:
        details.update({"nodes": search.nodes, "backtracks": search.backtracks, "attempts": attempts})
        return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, None, details)
    details.update({"nodes": search.nodes, "backtracks": search.backtracks, "attempts": attempts})
    return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, None, None, details)


DEFAULT_CAP = 10 ** 11


def brute_force_k5_support(A: ReducedHypergraph, phi: Bicolouring | None = None, *,
                           cap: int = DEFAULT_CAP, budget: int | None = None) -> Certificate:
    """Exhaustive search over 5-subsets and vertex choices by plain membership checks.

    With ``phi`` each class is restricted to its pentagon colour, for all 12
    pentagons of each 5-subset.  Raises :class:`CapabilityError` when a single
    5-subset has more than ``cap`` raw combinations.
    """
    if len(A.indices) < 5:
        raise ValueError("K5 support needs at least five indices")
    if phi is not None:
        phi.check_total(A)
    used = 0
    for J in combinations(A.indices, 5):
        if phi is None:
            layouts = [None]
        else:
            layouts = pentagons(J)
        for labels in layouts:
            allowed = None
            if labels is not None:
                allowed = {}
                for a, b in combinations(range(1, 6), 2):
                    p = pair(labels[a], labels[b])
                    allowed[p] = phi.colour[p] == label_colour(a, b)
            sizes = [int(allowed[p].sum()) if allowed else A.sizes[p] for p in combinations(J, 2)]
            if prod(sizes) > cap:
                raise CapabilityError(f"{prod(sizes)} combinations on {list(J)} exceed the cap {cap}")
            csp, pairs = clique_csp(A, J, allowed)
            status, vals, nodes = csp.solve_naive(-1 if budget is None else max(budget - used, 0))
            used += nodes
            if status == kernels.FOUND:
                witness = {"J": list(J), "transversal": Transversal.on_set(J, dict(zip(pairs, vals)))}
                return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, witness, details={"nodes": used})
            if status == kernels.BUDGET:
                return Certificate(Verdict.PASSED_BUDGET, Method.EXHAUSTIVE, None, details={"nodes": used})
    return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, None, details={"nodes": used})
