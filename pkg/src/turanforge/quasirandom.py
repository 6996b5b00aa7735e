"""Density functionals on ordinary 3-graphs.

Two families of checks live here:

* link quasirandomness: every vertex subset ``X`` of a link graph spans
  ``d|X|^2/2 +- delta n^2`` edges;
* ee-density: ``e_ee(P, Q) >= d |K_ee(P, Q)| - eta n^3`` for pair sets ``P, Q``.

Both quantify over exponentially many objects, so the checks come in flavours
that can certify (exhaustive, spectral) or only refute (sampling, adversarial
local search).  Every threshold comparison is done on integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from turanforge import kernels
from turanforge.certificate import Certificate, Method, Verdict, as_fraction
from turanforge.constructions import rng
from turanforge.errors import CapabilityError
from turanforge.hypercore import Graph, Hypergraph3, link_graph

EXHAUSTIVE_LIMIT = 20


class PairSet:
    """Set of ordered pairs ``(x, y)`` over ``0..n-1`` as an ``n x n`` boolean matrix."""

    def __init__(self, matrix: np.ndarray):
        M = np.array(matrix, dtype=bool)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("a pair set is a square boolean matrix")
        M.setflags(write=False)
        self.matrix = M
        self.size = int(M.sum())

    @classmethod
    def full(cls, n: int) -> "PairSet":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "PairSet":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def product(cls, n: int, A: Iterable[int], B: Iterable[int]) -> "PairSet":
        """``A x B``."""
        a = np.zeros(n, dtype=bool)
        b = np.zeros(n, dtype=bool)
        a[list(A)] = True
        b[list(B)] = True
        return cls(np.outer(a, b))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "PairSet":
        M = np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            M[x, y] = True
        return cls(M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __contains__(self, xy: tuple[int, int]) -> bool:
        return bool(self.matrix[xy])

    def __len__(self) -> int:
        return self.size

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.matrix)]

    def off_diagonal(self) -> "PairSet":
        M = self.matrix.copy()
        np.fill_diagonal(M, False)
        return PairSet(M)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairSet):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __repr__(self) -> str:
        return f"PairSet(n={self.n}, size={self.size})"

    def to_dict(self) -> dict:
        return {"n": self.n, "pairs": self.pairs()}


# -- subset deviation and link certification ------------------------------------------


def subset_deviation(G: Graph, d, X: Iterable[int]) -> Fraction:
    """``|2 e(X) - d |X|^2|`` as an exact rational.

    ``X`` is ``(delta, d)``-good iff this is at most ``2 delta n^2``.
    """
    d = as_fraction(d)
    X = sorted(set(int(v) for v in X))
    for v in X:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} out of range 0..{G.n - 1}")
    s = len(X)
    return abs(2 * G.edges_inside(X) - d * s * s)


def _violates(dev2q: int, q: int, delta: Fraction, n: int) -> bool:
    # dev2q = |2 q e - p s^2| = q |2e - d s^2|; violation iff |2e - d s^2| > 2 delta n^2
    return dev2q * delta.denominator > 2 * q * delta.numerator * n * n


def _mask_to_set(mask: int, n: int) -> list[int]:
    return [v for v in range(n) if (mask >> v) & 1]


def _exhaustive_link(G: Graph, d: Fraction, delta: Fraction) -> Certificate:
    n = G.n
    p, q = d.numerator, d.denominator
    best, mask = kernels.max_deviation(G.adjmask(), n, p, q)
    dev = Fraction(best, 2 * q)
    details = {"subsets": 1 << n, "argmax": _mask_to_set(mask, n)}
    if _violates(best, q, delta, n):
        return Certificate(Verdict.REFUTED, Method.EXHAUSTIVE, _mask_to_set(mask, n), dev, details)
    return Certificate(Verdict.CERTIFIED, Method.EXHAUSTIVE, None, dev, details)


def spectral_radius_shifted(A: np.ndarray, d: Fraction) -> float:
    """Largest ``|eigenvalue|`` of ``A - d J``."""
    M = A.astype(np.float64) - float(d)
    ev = np.linalg.eigvalsh(M)
    return float(max(abs(ev[0]), abs(ev[-1])))


def _spectral_link(G: Graph, d: Fraction, delta: Fraction, slack: float = 1e-9) -> Certificate:
    # 2e(X) - d|X|^2 = 1_X^T (A - dJ) 1_X, so |e(X) - d|X|^2/2| <= lam |X| / 2 <= lam n / 2
    n = G.n
    lam = spectral_radius_shifted(G.matrix, d)
    bound = lam * n / 2
    details = {"lambda": lam, "constant": 0.5, "bound": bound,
               "rule": "|e(X) - d|X|^2/2| <= lambda * |X| / 2"}
    if bound * (1 + slack) + slack <= float(delta) * n * n:
        return Certificate(Verdict.CERTIFIED, Method.SPECTRAL, None, bound, details)
    return Certificate(Verdict.PASSED_BUDGET, Method.SPECTRAL, None, bound, details)


def _sample_masks(n: int, k: int, gen: np.random.Generator) -> np.ndarray:
    """``k`` random subsets as rows; row 0 is ``V`` and inclusion rates vary per row."""
    rates = gen.uniform(0.05, 0.95, size=(k, 1))
    S = gen.random((k, n)) < rates
    S[0] = True
    return S


def _ascend(A: np.ndarray, x: np.ndarray, d: float, sign: float, max_steps: int) -> np.ndarray:
    """Greedy single-vertex flips increasing ``sign * (2e(X) - d|X|^2)``."""
    x = x.copy()
    g = A @ x.astype(np.float64)
    s = float(x.sum())
    for _ in range(max_steps):
        add = 2 * g - d * (2 * s + 1)
        rem = -2 * g - d * (-2 * s + 1)
        gain = sign * np.where(x, rem, add)
        v = int(np.argmax(gain))
        if gain[v] <= 1e-9:
            break
        if x[v]:
            x[v] = False
            g -= A[:, v]
            s -= 1
        else:
            x[v] = True
            g += A[:, v]
            s += 1
    return x


def _sampling_link(G: Graph, d: Fraction, delta: Fraction, S: np.ndarray, ascent: int) -> Certificate:
    n = G.n
    p, q = d.numerator, d.denominator
    A32 = G.matrix.astype(np.float32)
    Sf = S.astype(np.float32)
    e2 = np.einsum("ij,ij->i", Sf @ A32, Sf)
    s = Sf.sum(axis=1)
    dev = np.abs(e2 - float(d) * s * s)
    order = np.argsort(-dev, kind="stable")[:ascent]
    candidates = [S[i] for i in order]
    A = G.matrix.astype(np.float64)
    for i in order:
        for sign in (1.0, -1.0):
            candidates.append(_ascend(A, S[i], float(d), sign, 4 * n))
    best, best_x = -1, None
    Ai = G.matrix.astype(np.int64)
    for x in candidates:
        xi = x.astype(np.int64)
        e2x = int(xi @ Ai @ xi)
        sx = int(xi.sum())
        val = abs(q * e2x - p * sx * sx)
        if val > best:
            best, best_x = val, x
    X = [int(v) for v in np.flatnonzero(best_x)]
    details = {"samples": int(S.shape[0]), "ascents": 2 * len(order), "argmax": X}
    dev_frac = Fraction(best, 2 * q)
    if _violates(best, q, delta, n):
        return Certificate(Verdict.REFUTED, Method.SAMPLING, X, dev_frac, details)
    return Certificate(Verdict.PASSED_BUDGET, Method.SAMPLING, None, dev_frac, details)


def certify_link_quasirandom(H: Hypergraph3, d, delta, mode: Method | str = Method.SAMPLING, *,
                             samples: int = 10_000, seed: int = 0, ascent: int = 8,
                             vertices: Sequence[int] | None = None) -> dict[int, Certificate]:
    """Check that each link graph is ``(delta, d)``-quasirandom.

    The certificate's ``deviation`` is the largest ``|e(X) - d|X|^2/2|`` seen
    (an upper bound for ``SPECTRAL``).  ``EXHAUSTIVE`` decides exactly for
    ``n <= 20``; ``SPECTRAL`` can only certify; ``SAMPLING`` can only refute.
    All vertices share one draw of ``samples`` subsets.
    """
    d, delta = as_fraction(d), as_fraction(delta)
    mode = Method(mode)
    n = H.n
    if mode == Method.EXHAUSTIVE and n > EXHAUSTIVE_LIMIT:
        raise CapabilityError(f"exhaustive subset scan needs n <= {EXHAUSTIVE_LIMIT} (got n={n})")
    if mode == Method.LOCAL_SEARCH:
        raise ValueError("link certification supports EXHAUSTIVE, SPECTRAL or SAMPLING")
    verts = range(n) if vertices is None else vertices
    S = _sample_masks(n, samples, rng(seed)) if mode == Method.SAMPLING else None
    out = {}
    for x in verts:
        G = link_graph(H, x)
        if mode == Method.EXHAUSTIVE:
            out[int(x)] = _exhaustive_link(G, d, delta)
        elif mode == Method.SPECTRAL:
            out[int(x)] = _spectral_link(G, d, delta)
        else:
            out[int(x)] = _sampling_link(G, d, delta, S, ascent)
    return out


# -- ee counts ------------------------------------------------------------------------


def _pair_matrix(P: PairSet | np.ndarray, n: int) -> np.ndarray:
    M = P.matrix if isinstance(P, PairSet) else np.asarray(P, dtype=bool)
    if M.shape != (n, n):
        raise ValueError(f"pair set must be {n} x {n}")
    return M


def e_ee(H: Hypergraph3, P: PairSet | np.ndarray, Q: PairSet | np.ndarray) -> int:
    """Number of ``((x, y), (y, z)) in P x Q`` with ``{x, y, z}`` an edge."""
    n = H.n
    Pm, Qm = _pair_matrix(P, n), _pair_matrix(Q, n)
    if n < 3 or not Pm.any() or not Qm.any():
        return 0
    return int(_through(_middle_first(H.tensor), Qm)[Pm].sum())


def _middle_first(T: np.ndarray) -> np.ndarray:
    """``Tm[y, x, z] = T[x, y, z]`` as float32; ``T`` is symmetric so this also serves :func:`_into`."""
    return np.ascontiguousarray(T.transpose(1, 0, 2), dtype=np.float32)


def _through(Tm: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """``C[x, y] = sum_z Q[y, z] T[x, y, z]``."""
    return np.rint(np.matmul(Tm, Q.astype(np.float32)[:, :, None])[:, :, 0].T).astype(np.int64)


def _into(Tm: np.ndarray, P: np.ndarray) -> np.ndarray:
    """``D[y, z] = sum_x P[x, y] T[x, y, z]``."""
    return np.rint(np.matmul(Tm, P.T.astype(np.float32)[:, :, None])[:, :, 0]).astype(np.int64)


def k_ee(P: PairSet | np.ndarray, Q: PairSet | np.ndarray, distinct: bool = False) -> int:
    """``|K_ee(P, Q)|``: aligned pairs ``((x, y), (y, z))``.

    Degenerate coordinates count unless ``distinct``, which drops ``x = z``
    (and any pair on the diagonal).
    """
    Pm = P.matrix if isinstance(P, PairSet) else np.asarray(P, dtype=bool)
    Qm = Q.matrix if isinstance(Q, PairSet) else np.asarray(Q, dtype=bool)
    if Pm.shape != Qm.shape:
        raise ValueError("pair sets live on different vertex sets")
    if distinct:
        Pm = Pm & ~np.eye(len(Pm), dtype=bool)
        Qm = Qm & ~np.eye(len(Qm), dtype=bool)
    col = Pm.sum(axis=0).astype(np.int64)
    row = Qm.sum(axis=1).astype(np.int64)
    total = int(col @ row)
    if distinct:
        total -= int((Pm & Qm.T).sum())
    return total


# -- adversarial ee-density search ------------------------------------------------------


@dataclass
class _State:
    P: np.ndarray
    Q: np.ndarray
    e: int
    k: int


class _EEScorer:
    def __init__(self, H: Hypergraph3, d: Fraction, distinct: bool):
        self.T = H.tensor
        self.Tm = _middle_first(H.tensor)
        self.n = H.n
        self.p, self.q = d.numerator, d.denominator
        self.distinct = distinct
        self.off = ~np.eye(self.n, dtype=bool)

    def state(self, P: np.ndarray, Q: np.ndarray) -> _State:
        if self.distinct:
            P, Q = P & self.off, Q & self.off
        e = int(_through(self.Tm, Q)[P].sum())
        return _State(P, Q, e, k_ee(P, Q, self.distinct))

    def lower(self, st: _State) -> int:
        """``q (d k - e)``: how far ``e_ee`` falls below ``d k_ee``."""
        return self.p * st.k - self.q * st.e

    def best_P(self, Q: np.ndarray, sign: int) -> np.ndarray:
        k_row = np.broadcast_to(Q.sum(axis=1).astype(np.int64)[None, :], (self.n, self.n))
        if self.distinct:
            k_row = k_row - Q.T.astype(np.int64)
        gain = sign * (self.p * k_row - self.q * _through(self.Tm, Q))
        P = gain > 0
        return P & self.off if self.distinct else P

    def best_Q(self, P: np.ndarray, sign: int) -> np.ndarray:
        k_col = np.broadcast_to(P.sum(axis=0).astype(np.int64)[:, None], (self.n, self.n))
        if self.distinct:
            k_col = k_col - P.T.astype(np.int64)
        gain = sign * (self.p * k_col - self.q * _into(self.Tm, P))
        Q = gain > 0
        return Q & self.off if self.distinct else Q


def ee_density_adversary(H: Hypergraph3, d, eta, budget: int = 10_000, *, seed: int = 0,
                         restrict_distinct: bool = False, rounds: int = 8) -> Certificate:
    """Look for pair sets with ``e_ee(P, Q) < d |K_ee(P, Q)| - eta n^3``.

    Starting points are ``V x V``, link-derived pair sets and random products
    ``A x B``, ``B x C``; each is improved by alternating exact best responses
    (given ``Q`` the optimal ``P`` is explicit, and vice versa).  ``budget``
    counts evaluated ``(P, Q)`` pairs.  The search never certifies.

    ``details["two_sided"]`` is the largest ``|e_ee - d k_ee| / n^3`` seen, the
    statistic of the two-sided (quasirandom) variant.
    """
    d, eta = as_fraction(d), as_fraction(eta)
    n = H.n
    sc = _EEScorer(H, d, restrict_distinct)
    gen = rng(seed)
    q = sc.q
    threshold = q * eta * n ** 3  # violation iff lower > threshold
    used = 0
    best_low, best_state = None, None
    best_up = 0

    def record(st: _State) -> bool:
        nonlocal best_low, best_state, best_up
        low = sc.lower(st)
        best_up = max(best_up, abs(low))
        if best_low is None or low > best_low:
            best_low, best_state = low, st
        return low > threshold

    def starts():
        full = np.ones((n, n), dtype=bool)
        yield full, full
        order = gen.permutation(n)
        for x in order:
            L = H.tensor[x]
            yield ~L, ~L
            yield L, L
            a = gen.random(n) < gen.uniform(0.2, 0.8)
            b = gen.random(n) < gen.uniform(0.2, 0.8)
            c = gen.random(n) < gen.uniform(0.2, 0.8)
            yield np.outer(a, b), np.outer(b, c)

    done = False
    for P0, Q0 in starts():
        if used >= budget or done:
            break
        st = sc.state(P0, Q0)
        used += 1
        if record(st):
            done = True
            break
        for sign in (1, -1):
            cur = st
            for _ in range(rounds):
                if used >= budget:
                    break
                P = sc.best_P(cur.Q, sign)
                nxt = sc.state(P, sc.best_Q(P, sign))
                used += 1
                hit = record(nxt)
                if sign == 1 and hit:
                    done = True
                    break
                if sign * sc.lower(nxt) <= sign * sc.lower(cur):
                    break
                cur = nxt
            if done:
                break
    n3 = n ** 3
    details = {
        "evaluations": used,
        "restrict_distinct": restrict_distinct,
        "two_sided": Fraction(best_up, q * n3) if n else Fraction(0),
        "e_ee": best_state.e if best_state else None,
        "k_ee": best_state.k if best_state else None,
    }
    dev = Fraction(best_low, q * n3) if best_low is not None and n else None
    if done:
        witness = {"P": PairSet(best_state.P), "Q": PairSet(best_state.Q)}
        return Certificate(Verdict.REFUTED, Method.LOCAL_SEARCH, witness, dev, details)
    return Certificate(Verdict.PASSED_BUDGET, Method.LOCAL_SEARCH, None, dev, details)


def ee_violation(H: Hypergraph3, P: PairSet, Q: PairSet, d, eta, distinct: bool = False) -> bool:
    """Exact re-check: ``e_ee(P, Q) < d |K_ee(P, Q)| - eta n^3``."""
    d, eta = as_fraction(d), as_fraction(eta)
    Pm, Qm = P.matrix, Q.matrix
    if distinct:
        Pm = Pm & ~np.eye(H.n, dtype=bool)
        Qm = Qm & ~np.eye(H.n, dtype=bool)
    return e_ee(H, Pm, Qm) < d * k_ee(Pm, Qm, distinct) - eta * H.n ** 3
