"""Text and JSON formats.

``H3 v1``  first non-comment line ``n m``, then ``m`` lines ``i j k`` with ``i < j < k``.
``PM v1``  first non-comment line ``n r``, then ``C(n, 2)`` lines ``i j v``.
``RH v1``  JSON object with ``indices``, ``class_sizes``, ``edges`` and optional
           ``colouring``, ``families`` and ``transversals`` blocks.

Several ``PM v1`` or ``H3 v1`` documents may be concatenated in one stream.
Comments start with ``#``.
"""

from __future__ import annotations

import json
from itertools import combinations
from math import comb
from typing import Any, Iterable, Iterator, TextIO

import numpy as np

from turanforge.constructions import PairMap
from turanforge.errors import ParseError
from turanforge.holes import VertexFamily
from turanforge.hypercore import Hypergraph3
from turanforge.reduced import BLUE, RED, Bicolouring, ReducedHypergraph, Transversal, pair

H3_TAG = "# H3 v1"
PM_TAG = "# PM v1"
RH_TAG = "RH v1"


def _lines(text: str | Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    lines = text.splitlines() if isinstance(text, str) else text
    for no, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _ints(tokens: list[str], count: int, no: int, path: str | None) -> list[int]:
    if len(tokens) != count:
        raise ParseError(f"expected {count} integers, found {len(tokens)} tokens", no, path)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"not an integer in {' '.join(tokens)!r}", no, path) from None


def sniff(text: str) -> str:
    """``"H3"``, ``"PM"`` or ``"RH"`` from the leading tag; plain text defaults to ``"PM"``."""
    head = text.lstrip()
    if head.startswith("{"):
        return "RH"
    if head.startswith(H3_TAG):
        return "H3"
    return "PM"


# -- H3 --------------------------------------------------------------------------------


def dump_h3(H: Hypergraph3) -> str:
    out = [H3_TAG, f"{H.n} {H.m}"]
    out.extend(f"{a} {b} {c}" for a, b, c in H.edges.tolist())
    return "\n".join(out) + "\n"


def iter_h3(text: str, path: str | None = None) -> Iterator[Hypergraph3]:
    it = _lines(text)
    for no, tok in it:
        n, m = _ints(tok, 2, no, path)
        if n < 0 or m < 0:
            raise ParseError("counts must be non-negative", no, path)
        edges = []
        for _ in range(m):
            try:
                no, tok = next(it)
            except StopIteration:
                raise ParseError(f"expected {m} edge lines, file ended after {len(edges)}", None, path) from None
            i, j, k = _ints(tok, 3, no, path)
            if not (0 <= i < j < k < n):
                raise ParseError(f"edge {i} {j} {k} must satisfy 0 <= i < j < k < {n}", no, path)
            edges.append((i, j, k))
        if len(set(edges)) != len(edges):
            raise ParseError("repeated edge", no, path)
        yield Hypergraph3(n, edges)


def load_h3(text: str, path: str | None = None) -> Hypergraph3:
    docs = list(iter_h3(text, path))
    if len(docs) != 1:
        raise ParseError(f"expected one H3 document, found {len(docs)}", None, path)
    return docs[0]


# -- PM --------------------------------------------------------------------------------


def dump_pm(pm: PairMap) -> str:
    out = [PM_TAG, f"{pm.n} {pm.r}"]
    out.extend(f"{i} {j} {int(pm.matrix[i, j])}" for i, j in combinations(range(pm.n), 2))
    return "\n".join(out) + "\n"


def iter_pm(text: str | Iterable[str], path: str | None = None) -> Iterator[PairMap]:
    it = _lines(text)
    for no, tok in it:
        n, r = _ints(tok, 2, no, path)
        if n < 0 or r < 1:
            raise ParseError("need n >= 0 and r >= 1", no, path)
        M = np.full((n, n), -1, dtype=np.int64)
        for _ in range(comb(n, 2)):
            try:
                no, tok = next(it)
            except StopIteration:
                raise ParseError(f"expected {comb(n, 2)} pair lines", None, path) from None
            i, j, v = _ints(tok, 3, no, path)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ParseError(f"pair {i} {j} out of range for n={n}", no, path)
            if not 0 <= v < r:
                raise ParseError(f"value {v} outside 0..{r - 1}", no, path)
            if M[i, j] >= 0:
                raise ParseError(f"pair {i} {j} given twice", no, path)
            M[i, j] = M[j, i] = v
        np.fill_diagonal(M, 0)
        yield PairMap(n, r, M)


def load_pm(text: str, path: str | None = None) -> PairMap:
    docs = list(iter_pm(text, path))
    if len(docs) != 1:
        raise ParseError(f"expected one PM document, found {len(docs)}", None, path)
    return docs[0]


# -- RH --------------------------------------------------------------------------------

_COLOURS = {"red": RED, "blue": BLUE, "r": RED, "b": BLUE, 0: RED, 1: BLUE}


def _key(k: str, size: int, where: str, path: str | None) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in k.split(","))
    except ValueError:
        raise ParseError(f"{where}: bad key {k!r}", None, path) from None
    if len(out) != size:
        raise ParseError(f"{where}: key {k!r} should name {size} indices", None, path)
    return out


def dump_rh(A: ReducedHypergraph, colouring: Bicolouring | None = None,
            families: dict[str, VertexFamily] | None = None,
            transversals: dict[str, Transversal] | None = None, extra: dict[str, Any] | None = None) -> str:
    doc: dict[str, Any] = {
        "format": RH_TAG,
        "indices": list(A.indices),
        "class_sizes": {f"{i},{j}": s for (i, j), s in A.sizes.items()},
        "edges": {f"{i},{j},{k}": np.argwhere(E).tolist() for (i, j, k), E in A.edges.items()},
    }
    if colouring is not None:
        doc["colouring"] = colouring.to_dict()
    if families:
        doc["families"] = {name: F.to_dict() for name, F in families.items()}
    if transversals:
        doc["transversals"] = {name: T.to_dict() for name, T in transversals.items()}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


class RHDocument:
    """Parsed ``RH v1`` file."""

    def __init__(self, A: ReducedHypergraph, colouring: Bicolouring | None,
                 families: dict[str, VertexFamily], transversals: dict[str, Transversal], raw: dict):
        self.A, self.colouring, self.families, self.transversals, self.raw = A, colouring, families, transversals, raw


def load_rh(text: str, path: str | None = None) -> RHDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, path) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, path)
    if doc.get("format", RH_TAG) != RH_TAG:
        raise ParseError(f"unsupported format {doc.get('format')!r}", 1, path)
    for key in ("indices", "class_sizes"):
        if key not in doc:
            raise ParseError(f"missing {key!r}", None, path)
    try:
        indices = [int(i) for i in doc["indices"]]
        sizes = {_key(k, 2, "class_sizes", path): int(v) for k, v in doc["class_sizes"].items()}
        cons = {}
        for k, triples in doc.get("edges", {}).items():
            t = _key(k, 3, "edges", path)
            if t not in sizes and not all(p in sizes for p in combinations(t, 2)):
                raise ParseError(f"edges: triple {k} uses unknown classes", None, path)
            shape = tuple(sizes[p] for p in combinations(t, 2))
            E = np.zeros(shape, dtype=bool)
            for abc in triples:
                a, b, c = (int(x) for x in abc)
                if not (0 <= a < shape[0] and 0 <= b < shape[1] and 0 <= c < shape[2]):
                    raise ParseError(f"edges: {k} entry {abc} outside the classes", None, path)
                E[a, b, c] = True
            cons[t] = E
        A = ReducedHypergraph(indices, sizes, cons)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"malformed reduced hypergraph: {exc}", None, path) from None
    colouring = None
    if "colouring" in doc:
        try:
            colouring = Bicolouring({_key(k, 2, "colouring", path): np.array([_COLOURS[c] for c in v], dtype=np.int8)
                                     for k, v in doc["colouring"].items()})
            colouring.check_total(A)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"colouring: {exc}", None, path) from None
    families = {}
    for name, block in doc.get("families", {}).items():
        try:
            families[name] = VertexFamily.from_lists(A, {_key(k, 2, f"families.{name}", path): v
                                                         for k, v in block.items()})
        except (ValueError, IndexError) as exc:
            raise ParseError(f"families.{name}: {exc}", None, path) from None
    transversals = {}
    for name, block in doc.get("transversals", {}).items():
        try:
            choice = {pair(*_key(k, 2, f"transversals.{name}", path)): int(v) for k, v in block["choice"].items()}
            T = Transversal(choice, block.get("kind", "J"))
            T.validate(A)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"transversals.{name}: {exc}", None, path) from None
        transversals[name] = T
    return RHDocument(A, colouring, families, transversals, doc)
