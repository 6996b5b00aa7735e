"""Hot inner loops: bitset clique search, constraint backtracking, Gray-code scans.

Every kernel here is written in the numba-compatible subset of Python and
wrapped with :func:`turanforge._accel.njit`, so the same source runs either
compiled or interpreted.  Bitsets are ``uint64`` rows; bit ``b`` of word ``w``
stands for element ``64 * w + b``.

Status codes returned by the searches: ``1`` found, ``0`` exhausted without a
solution, ``-1`` node budget spent.
"""

from __future__ import annotations

import numpy as np

from turanforge._accel import USE_NUMBA, njit

FOUND = 1
ABSENT = 0
BUDGET = -1

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_M7F = np.uint64(0x7F)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S8 = np.uint64(8)
_S16 = np.uint64(16)
_S32 = np.uint64(32)
_S63 = np.uint64(63)


def words_for(m: int) -> int:
    return max(1, (m + 63) // 64)


def pack_bits(mask: np.ndarray, width: int | None = None) -> np.ndarray:
    """Pack a boolean array along its last axis into ``uint64`` words."""
    mask = np.asarray(mask, dtype=bool)
    m = mask.shape[-1]
    W = words_for(m) if width is None else width
    packed = np.packbits(mask, axis=-1, bitorder="little")
    out = np.zeros(mask.shape[:-1] + (8 * W,), dtype=np.uint8)
    out[..., : packed.shape[-1]] = packed
    return out.view("<u8").astype(np.uint64, copy=False)


def unpack_bits(words: np.ndarray, m: int) -> np.ndarray:
    words = np.ascontiguousarray(np.asarray(words, dtype="<u8"))
    as_bytes = words.view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :m].astype(bool)


@njit
def popcount64(x):
    x = x - ((x >> _S1) & _M1)
    x = (x & _M2) + ((x >> _S2) & _M2)
    x = (x + (x >> _S4)) & _M4
    x = x + (x >> _S8)
    x = x + (x >> _S16)
    x = x + (x >> _S32)
    return int(x & _M7F)


@njit
def popcount_row(row):
    total = 0
    for w in range(row.shape[0]):
        total += popcount64(row[w])
    return total


@njit
def _test_bit(row, v):
    return ((row[v >> 6] >> np.uint64(v & 63)) & _ONE) != _ZERO


@njit
def _clear_upto(row, v):
    """Clear bits ``0..v`` inclusive."""
    w = v >> 6
    for i in range(w):
        row[i] = _ZERO
    row[w] &= (_FULL << np.uint64(v & 63)) << _ONE


@njit
def build_pair_adjacency(edges, n, W):
    """``adj[x, y]`` bitset of third vertices, from an ``(m, 3)`` edge array."""
    adj = np.zeros((n, n, W), dtype=np.uint64)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        c = edges[e, 2]
        adj[a, b, c >> 6] |= _ONE << np.uint64(c & 63)
        adj[b, a, c >> 6] |= _ONE << np.uint64(c & 63)
        adj[a, c, b >> 6] |= _ONE << np.uint64(b & 63)
        adj[c, a, b >> 6] |= _ONE << np.uint64(b & 63)
        adj[b, c, a >> 6] |= _ONE << np.uint64(a & 63)
        adj[c, b, a >> 6] |= _ONE << np.uint64(a & 63)
    return adj


@njit
def clique_search(adj, n, ell, budget):
    """Lexicographically first ``ell``-clique of a 3-graph.

    ``adj[x, y]`` is the bitset of all ``z`` with ``{x, y, z}`` an edge.  A
    partial clique is only extended through the intersection of the pair
    neighbourhoods of everything chosen so far.
    """
    W = adj.shape[2]
    cand = np.zeros((ell + 1, W), dtype=np.uint64)
    verts = np.full(ell, -1, dtype=np.int64)
    pos = np.zeros(ell + 1, dtype=np.int64)
    for v in range(n):
        cand[0, v >> 6] |= _ONE << np.uint64(v & 63)
    nodes = 0
    k = 0
    while k >= 0:
        v = pos[k]
        found = -1
        while v < n:
            if _test_bit(cand[k], v):
                found = v
                break
            v += 1
        if found < 0:
            k -= 1
            continue
        pos[k] = found + 1
        nodes += 1
        if budget >= 0 and nodes > budget:
            return BUDGET, verts, nodes
        verts[k] = found
        if k == ell - 1:
            return FOUND, verts, nodes
        for w in range(W):
            cand[k + 1, w] = cand[k, w]
        _clear_upto(cand[k + 1], found)
        for s in range(k):
            a = verts[s]
            for w in range(W):
                cand[k + 1, w] &= adj[a, found, w]
        if popcount_row(cand[k + 1]) < ell - k - 1:
            continue
        k += 1
        pos[k] = found + 1
    return ABSENT, verts, nodes


@njit
def _fill_candidates(v, vals, cand, allowed, tables, con_ptr, con_tab, con_stride,
                     con_o1, con_o2, bin_ptr, bin_tab, bin_o):
    W = allowed.shape[1]
    for w in range(W):
        cand[v, w] = allowed[v, w]
    for c in range(con_ptr[v], con_ptr[v + 1]):
        row = con_tab[c] + vals[con_o1[c]] * con_stride[c] + vals[con_o2[c]]
        for w in range(W):
            cand[v, w] &= tables[row, w]
    for c in range(bin_ptr[v], bin_ptr[v + 1]):
        row = bin_tab[c] + vals[bin_o[c]]
        for w in range(W):
            cand[v, w] &= tables[row, w]


@njit
def csp_search(nvar, dsize, allowed, tables, con_ptr, con_tab, con_stride, con_o1, con_o2,
               bin_ptr, bin_tab, bin_o, budget):
    """Backtracking over variables ``0..nvar-1`` in order, values in class order.

    Constraints are attached to the last of their variables.  A ternary
    constraint ``c`` on variable ``v`` reads the candidate bitset for ``v`` from
    row ``con_tab[c] + vals[o1] * con_stride[c] + vals[o2]`` of ``tables``; a
    binary one reads row ``bin_tab[c] + vals[o]``.  Candidate sets are thus
    plain word-wise intersections.
    """
    W = allowed.shape[1]
    vals = np.full(nvar, -1, dtype=np.int64)
    cand = np.zeros((nvar, W), dtype=np.uint64)
    pos = np.zeros(nvar, dtype=np.int64)
    nodes = 0
    if nvar == 0:
        return FOUND, vals, nodes
    _fill_candidates(0, vals, cand, allowed, tables, con_ptr, con_tab, con_stride,
                     con_o1, con_o2, bin_ptr, bin_tab, bin_o)
    k = 0
    while k >= 0:
        v = pos[k]
        found = -1
        while v < dsize[k]:
            if _test_bit(cand[k], v):
                found = v
                break
            v += 1
        if found < 0:
            vals[k] = -1
            k -= 1
            continue
        pos[k] = found + 1
        nodes += 1
        if budget >= 0 and nodes > budget:
            return BUDGET, vals, nodes
        vals[k] = found
        if k == nvar - 1:
            return FOUND, vals, nodes
        _fill_candidates(k + 1, vals, cand, allowed, tables, con_ptr, con_tab, con_stride,
                         con_o1, con_o2, bin_ptr, bin_tab, bin_o)
        if popcount_row(cand[k + 1]) == 0:
            continue
        k += 1
        pos[k] = 0
    return ABSENT, vals, nodes


@njit
def naive_search(nvar, dsize, allowed, member, trip_off, trip_s1, trip_s2,
                 chk_ptr, chk_trip, chk_a, chk_b, chk_c, budget):
    """Plain depth-first enumeration with membership look-ups.

    Independent of :func:`csp_search`: no bitsets, no candidate intersection.
    After variable ``v`` is set, each triple ``t`` listed for ``v`` is checked
    by reading ``member[trip_off[t] + (a * s1 + b * s2 + c)]``.
    """
    vals = np.full(nvar, -1, dtype=np.int64)
    nodes = 0
    if nvar == 0:
        return FOUND, vals, nodes
    k = 0
    vals[0] = -1
    while k >= 0:
        v = vals[k] + 1
        placed = False
        while v < dsize[k]:
            if allowed[k, v]:
                vals[k] = v
                nodes += 1
                if budget >= 0 and nodes > budget:
                    return BUDGET, vals, nodes
                ok = True
                for c in range(chk_ptr[k], chk_ptr[k + 1]):
                    t = chk_trip[c]
                    idx = trip_off[t] + vals[chk_a[c]] * trip_s1[t] + vals[chk_b[c]] * trip_s2[t] + vals[chk_c[c]]
                    if member[idx] == 0:
                        ok = False
                        break
                if ok:
                    placed = True
                    break
            v += 1
        if not placed:
            vals[k] = -1
            k -= 1
            continue
        if k == nvar - 1:
            return FOUND, vals, nodes
        k += 1
        vals[k] = -1
    return ABSENT, vals, nodes


@njit
def _lowest_bit_index(i):
    b = 0
    while (i >> b) & 1 == 0:
        b += 1
    return b


@njit
def gray_max_deviation(adjmask, n, p, q):
    """Max over all ``X`` of ``|2 q e(X) - p |X|^2|`` for a graph on ``n <= 62`` vertices.

    ``adjmask[v]`` is the neighbourhood of ``v`` as an int bitmask.  Subsets are
    visited in Gray-code order so each step toggles one vertex.
    """
    X = 0
    e = 0
    s = 0
    best = 0
    best_mask = 0
    for i in range(1, 1 << n):
        v = _lowest_bit_index(i)
        bit = 1 << v
        if X & bit:
            X ^= bit
            s -= 1
            e -= popcount64(np.uint64(adjmask[v] & X))
        else:
            e += popcount64(np.uint64(adjmask[v] & X))
            X |= bit
            s += 1
        dev = 2 * q * e - p * s * s
        if dev < 0:
            dev = -dev
        if dev > best:
            best = dev
            best_mask = X
    return best, best_mask


def gray_max_deviation_numpy(adjmask: np.ndarray, n: int, p: int, q: int, chunk: int = 1 << 14):
    """Vectorised equivalent of :func:`gray_max_deviation` (subsets in binary order)."""
    A = np.zeros((n, n), dtype=np.float64)
    for v in range(n):
        for u in range(n):
            if (int(adjmask[v]) >> u) & 1:
                A[v, u] = 1.0
    shifts = np.arange(n, dtype=np.int64)
    best, best_mask = 0, 0
    total = 1 << n
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        e2 = np.einsum("ij,ij->i", X @ A, X)  # = 2 e(X)
        s = X.sum(axis=1)
        dev = np.abs(q * e2 - p * s * s)
        i = int(np.argmax(dev))
        if dev[i] > best:
            best, best_mask = int(round(dev[i])), int(masks[i])
    return best, best_mask


def max_deviation(adjmask: np.ndarray, n: int, p: int, q: int):
    if USE_NUMBA:
        best, mask = gray_max_deviation(np.asarray(adjmask, dtype=np.int64), n, p, q)
        return int(best), int(mask)
    return gray_max_deviation_numpy(adjmask, n, p, q)
