"""``turanforge`` command line.

Exit codes: 0 verdicts produced, 1 a refutation where certification was
asked for, 2 usage error, 3 parse error, 4 capability error, 5 an exact
search ran out of budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from turanforge import constructions as cons
from turanforge import embedk5, holes, io, quasirandom, reduced
from turanforge._accel import backend_name
from turanforge.certificate import Certificate, Verdict, as_fraction, jsonable
from turanforge.errors import BudgetError, CapabilityError, ParseError, TuranforgeError
from turanforge.hypercore import Hypergraph3, contains_clique, edge_density
from turanforge.reduced import Orientation

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_PARSE, EXIT_CAPABILITY, EXIT_BUDGET = 0, 1, 2, 3, 4, 5


class _Usage(Exception):
    pass


def _frac(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _intlist(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _read(path: str | None) -> tuple[str, str | None]:
    if path in (None, "-"):
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


# -- output ------------------------------------------------------------------------------


class Output:
    def __init__(self, args: argparse.Namespace, stream):
        self.fmt = args.format
        self.stream = stream
        self.config = _config(args)
        self.start = time.perf_counter()
        self.timing = args.timing

    def report(self, result: dict[str, Any], text: str | None = None) -> None:
        if self.fmt == "json":
            doc = {"config": self.config, "backend": backend_name(), "result": jsonable(result)}
            if self.timing:
                doc["seconds"] = round(time.perf_counter() - self.start, 6)
            self.stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        elif self.fmt == "csv":
            flat = _flatten(jsonable(result))
            w = csv.writer(self.stream, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in flat:
                w.writerow([k, v])
        else:
            self.stream.write((text if text is not None else _plain(jsonable(result))) + "\n")

    def raw(self, text: str) -> None:
        self.stream.write(text)


def _config(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"func", "format", "timing"}
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        if set(obj) == {"exact", "float"}:
            return [(prefix, obj["exact"])]
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    if isinstance(obj, list):
        return [(prefix, " ".join(str(x) for x in obj))]
    return [(prefix, obj)]


def _plain(obj: Any) -> str:
    return "\n".join(f"{k}: {v}" for k, v in _flatten(obj))


def _rat(x: Fraction | None) -> str:
    if x is None:
        return "none"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- construct ---------------------------------------------------------------------------


def cmd_construct(args, out: Output) -> int:
    kind = args.kind
    if kind in ("psi", "ramsey"):
        r = 3 if kind == "psi" else args.r
        if args.n is None:
            raise _Usage("construct psi|ramsey needs --n")
        if args.all:
            if r ** (args.n * (args.n - 1) // 2) > 10 ** 6:
                raise CapabilityError("--all is limited to 10^6 maps")
            for pm in cons.all_pairmaps(args.n, r):
                out.raw(_emit_map(pm, kind, args.emit))
        else:
            out.raw(_emit_map(cons.random_pairmap(args.n, r, args.seed), kind, args.emit))
        return EXIT_OK
    if kind == "mod3":
        A = cons.mod3_reduced(args.indices, args.class_size or 3, args.randomized, args.seed)
        out.raw(io.dump_rh(A))
        return EXIT_OK
    if kind == "nonmono":
        A, phi = cons.nonmonochromatic_complete(args.indices, args.class_size or 2)
        out.raw(io.dump_rh(A, phi))
        return EXIT_OK
    if kind == "bicoloured":
        A, phi = cons.random_bicoloured(args.indices, args.class_size or 12, args.tau, args.seed)
        out.raw(io.dump_rh(A, phi))
        return EXIT_OK
    if kind == "preimage":
        doc = _load_rh(args)
        A_h, h = cons.random_preimage(doc.A, args.ell, args.seed)
        extra = {"homomorphism": {f"{i},{j}": v.tolist() for (i, j), v in h.items()}}
        out.raw(io.dump_rh(A_h, extra=extra))
        return EXIT_OK
    raise _Usage(f"unknown construction {kind!r}")


def _emit_map(pm, kind: str, emit: str) -> str:
    if emit == "pm":
        return io.dump_pm(pm)
    H = cons.psi_hypergraph(pm) if kind == "psi" else cons.ramsey_hypergraph(pm)
    return io.dump_h3(H)


# -- check -------------------------------------------------------------------------------


def cmd_check(args, out: Output) -> int:
    ell = args.ell
    violations, total, first = 0, 0, None
    if args.samples is not None:
        if args.n is None:
            raise _Usage("sampled check needs --n")
        fmt, path = "PM", None
        r = 3 if args.rule == "psi" else 2
        maps = [cons.random_pairmap(args.n, r, args.seed + s) for s in range(args.samples)]
        text = "".join(io.dump_pm(pm) for pm in maps)
    else:
        text, path = _read(args.input)
        fmt = io.sniff(text)
    if fmt == "H3":
        graphs = ((None, H) for H in io.iter_h3(text, path))
    elif fmt == "PM":
        rule = args.rule
        def gen():
            for pm in io.iter_pm(text, path):
                if rule == "psi":
                    yield pm, cons.psi_hypergraph(pm)
                else:
                    yield pm, cons.ramsey_hypergraph(pm)
        graphs = gen()
    else:
        raise _Usage("check expects PM v1 or H3 v1 input")
    for pm, H in graphs:
        total += 1
        if H.n < ell:
            continue
        c = contains_clique(H, ell, args.budget)
        if c.verdict == Verdict.PASSED_BUDGET:
            raise BudgetError(f"clique search on document {total} ran out of budget")
        if c.verdict == Verdict.CERTIFIED:
            violations += 1
            if first is None:
                first = {"document": total, "clique": list(c.witness)}
    noun = "maps" if fmt == "PM" else "hypergraphs"
    result = {"ell": ell, "violations": violations, "total": total, "first_violation": first}
    out.report(result, f"{violations} violations / {total} {noun}")
    return EXIT_REFUTED if violations else EXIT_OK


# -- measure -----------------------------------------------------------------------------


def _load_h3(args) -> Hypergraph3:
    text, path = _read(args.input)
    if io.sniff(text) == "PM":
        pm = io.load_pm(text, path)
        return cons.psi_hypergraph(pm) if pm.r == 3 else cons.ramsey_hypergraph(pm)
    return io.load_h3(text, path)


def cmd_measure(args, out: Output) -> int:
    H = _load_h3(args)
    if args.what == "links":
        certs = quasirandom.certify_link_quasirandom(H, args.d, args.delta, args.mode.upper(),
                                                     samples=args.samples, seed=args.seed)
        verdicts = {v: sum(1 for c in certs.values() if c.verdict == v) for v in Verdict}
        worst = max(certs.values(), key=lambda c: c.deviation)
        result = {"n": H.n, "verdicts": {v.value: k for v, k in verdicts.items()},
                  "max_deviation": worst.deviation,
                  "max_deviation_over_n2": (worst.deviation / (H.n * H.n)) if H.n else 0,
                  "vertices": {x: c for x, c in certs.items()}}
        text = (f"links: {verdicts[Verdict.CERTIFIED]} certified, {verdicts[Verdict.REFUTED]} refuted, "
                f"{verdicts[Verdict.PASSED_BUDGET]} undecided; max deviation {float(worst.deviation):.6g}")
        out.report(result, text)
        return EXIT_REFUTED if verdicts[Verdict.REFUTED] else EXIT_OK
    c = quasirandom.ee_density_adversary(H, args.d, args.eta, args.budget, seed=args.seed,
                                         restrict_distinct=args.distinct)
    dev = c.deviation
    text = (f"eedensity: {c.verdict.value}; worst d*k_ee - e_ee = {float(dev):.6g} n^3; "
            f"two-sided {float(c.details['two_sided']):.6g} n^3")
    out.report({"edge_density": edge_density(H) if H.n >= 3 else None, "certificate": c}, text)
    return EXIT_REFUTED if c.verdict == Verdict.REFUTED else EXIT_OK


# -- reduced -----------------------------------------------------------------------------


def _load_rh(args) -> io.RHDocument:
    text, path = _read(args.input)
    return io.load_rh(text, path)


def _budget_exit(c: Certificate) -> int:
    return EXIT_BUDGET if c.verdict == Verdict.PASSED_BUDGET else EXIT_OK


def cmd_reduced(args, out: Output) -> int:
    doc = _load_rh(args)
    A = doc.A
    what = args.what
    if what == "density":
        rep = reduced.min_ee_density(A)
        out.report(rep.to_dict(), _rat(rep.value))
        return EXIT_OK
    if what == "vvv":
        v = reduced.vvv_min_density(A, args.K, args.L, args.M)
        out.report({"value": v}, _rat(v))
        return EXIT_OK
    if what == "supports":
        c = reduced.supports_clique(A, args.ell, args.budget)
        text = {Verdict.CERTIFIED: "supported", Verdict.REFUTED: "not supported",
                Verdict.PASSED_BUDGET: "undecided (budget)"}[c.verdict]
        out.report({"certificate": c}, f"K{args.ell}: {text}")
        return _budget_exit(c)
    if what == "tau2":
        phi = _need_colouring(doc)
        valid = reduced.validate_bicolouring(A, phi)
        t = reduced.tau2(A, phi)
        out.report({"valid": valid, "tau2": t}, f"{_rat(t)} (valid={str(valid).lower()})")
        return EXIT_OK
    if what == "inhabited":
        if args.J is not None:
            c = reduced.find_inhabited_triple(A, args.J, budget=args.budget)
        else:
            c = reduced.find_inhabited_triple(A, K=args.K, L=args.L, M=args.M, budget=args.budget)
        out.report({"certificate": c}, f"inhabited triple: {c.verdict.value}")
        return _budget_exit(c)
    raise _Usage(f"unknown reduced command {what!r}")


def _need_colouring(doc: io.RHDocument):
    if doc.colouring is None:
        raise _Usage("input has no colouring block")
    return doc.colouring


def _family(doc: io.RHDocument, name: str | None):
    if name is None:
        raise _Usage("this command needs --family")
    if name not in doc.families:
        raise _Usage(f"no family named {name!r} (have {sorted(doc.families)})")
    return doc.families[name]


# -- holes -------------------------------------------------------------------------------


def cmd_holes(args, out: Output) -> int:
    doc = _load_rh(args)
    A = doc.A
    what = args.what
    if what == "qlink":
        if args.transversal not in doc.transversals:
            raise _Usage(f"no transversal named {args.transversal!r}")
        F = holes.q_link(A, doc.transversals[args.transversal], args.kstar, args.ell)
        w = holes.hole_width(A, F) if len(args.kstar) >= 2 and all(m.any() for m in F.sets.values()) else None
        out.report({"family": F, "width": w}, json.dumps(F.to_dict()))
        return EXIT_OK
    F = _family(doc, args.family)
    J = args.J
    if what == "mu":
        v = holes.hole_mu(A, F, J)
        out.report({"mu": v}, _rat(v))
    elif what == "width":
        v = holes.hole_width(A, F, J)
        out.report({"width": v}, _rat(v))
    elif what == "exceptional":
        C = holes.exceptional_cherries(A, F, args.eps, args.orientation.upper(), J)
        out.report({"cherries": C, "total": C.total()}, f"{C.total()} exceptional {args.orientation.lower()} cherries")
    elif what == "bad":
        G = _family(doc, args.other)
        sets = holes.bad_cherries(A, F, G, args.gamma, J)
        res = {o.value: {"cherries": s, "total": s.total()} for o, s in sets.items()}
        out.report(res, " ".join(f"{o.value.lower()}={s.total()}" for o, s in sets.items()))
    elif what == "relation":
        G = _family(doc, args.other)
        rel = holes.holes_relation(A, F, G, J if J is not None else F.indices(), args.delta)
        out.report({"relation": rel}, rel.value)
    else:
        raise _Usage(f"unknown holes command {what!r}")
    return EXIT_OK


# -- embed -------------------------------------------------------------------------------


def cmd_embed(args, out: Output) -> int:
    doc = _load_rh(args)
    phi = _need_colouring(doc)
    c = embedk5.embed_k5_bicoloured(doc.A, phi, args.eps, args.xi, budget=args.budget, order=args.order)
    result: dict[str, Any] = {"certificate": c}
    text = f"embed: {c.verdict.value}"
    if not c.details.get("hypothesis", True):
        text += f" (not run: tau2 = {_rat(c.details['tau2'])} < 1/3 + {_rat(c.details['eps'])})"
    if c.verdict == Verdict.CERTIFIED:
        w = c.witness
        edges = [list(t) for t in _witness_edges(w)]
        result["validated_edges"] = len(edges)
        text += f"; {len(edges)} edges validated on J={w.J}"
    if args.oracle:
        o = embedk5.brute_force_k5_support(doc.A, phi)
        result["oracle"] = o
        text += f"; oracle {o.verdict.value}"
        if c.verdict == Verdict.CERTIFIED and o.verdict == Verdict.REFUTED:
            raise AssertionError("embedding found where the oracle reports none")
    out.report(result, text)
    if not c.details.get("hypothesis", True):
        return EXIT_OK
    return _budget_exit(c)


def _witness_edges(w: embedk5.EmbeddingWitness):
    from itertools import combinations

    T = w.transversal()
    return [(t, T[(t[0], t[1])], T[(t[0], t[2])], T[(t[1], t[2])]) for t in combinations(w.J, 3)]


# -- search wicked -----------------------------------------------------------------------


def search_wicked(index_size: int, class_size: int, eps: Fraction, iterations: int, budget: int,
                  seed: int) -> dict[str, Any]:
    """Heuristic: raise the minimum codegree of a ``K5``-free instance one edge at a time.

    Starts from a randomized mod-3 instance (density exactly 1/3, no supported
    ``K5``). Each step adds an edge completing a cherry of minimum codegree;
    additions that make ``K5`` supported, or leave it undecided within the
    budget, are undone and banned.
    """
    if index_size < 3:
        raise ValueError("index size must be at least 3")
    gen = cons.rng(seed)
    start = cons.mod3_reduced(index_size, class_size, True, seed)
    E = {t: M.copy() for t, M in start.edges.items()}
    banned: set[tuple] = set()
    best = reduced.min_ee_density(start).value
    best_edges = {t: M.copy() for t, M in E.items()}
    undecided = accepted = 0
    for _ in range(iterations):
        cur = start.with_constituents(E)
        rep = reduced.min_ee_density(cur)
        if rep.value > best:
            best, best_edges = rep.value, {t: M.copy() for t, M in E.items()}
        moves = [m for m in _min_cherry_moves(cur, rep.value) if m not in banned]
        if not moves:
            break
        t, o, a, b, c = moves[int(gen.integers(len(moves)))]
        idx = {Orientation.LEFT: (a, b, c), Orientation.MIDDLE: (a, c, b), Orientation.RIGHT: (c, a, b)}[o]
        E[t][idx] = True
        cert = reduced.supports_clique(start.with_constituents(E), 5, budget) if index_size >= 5 else None
        if cert is not None and cert.verdict != Verdict.REFUTED:
            undecided += cert.verdict == Verdict.PASSED_BUDGET
            E[t][idx] = False
            banned.add((t, o, a, b, c))
        else:
            accepted += 1
    final = start.with_constituents(best_edges)
    return {
        "heuristic": True,
        "start_min_ee_density": reduced.min_ee_density(start).value,
        "best_min_ee_density": best,
        "target": Fraction(1, 3) + eps,
        "wicked": best >= Fraction(1, 3) + eps,
        "accepted_edges": accepted,
        "rejected_edges": len(banned),
        "undecided_checks": undecided,
        "edges": final.total_edges(),
        "instance": json.loads(io.dump_rh(final)),
    }


def _min_cherry_moves(A: reduced.ReducedHypergraph, value: Fraction) -> list[tuple]:
    """Every (triple, orientation, cherry, completion) that lifts a cherry of minimum codegree."""
    out = []
    for t in A.edges:
        for o in Orientation:
            N = A.cherry_table(t, o)
            deg = N.sum(axis=2)
            for a, b in np.argwhere(deg * value.denominator == value.numerator * N.shape[2]):
                out.extend((t, o, int(a), int(b), int(c)) for c in np.flatnonzero(~N[a, b]))
    return out


def cmd_search(args, out: Output) -> int:
    res = search_wicked(args.index_size, args.class_size, args.eps, args.iterations, args.budget, args.seed)
    text = (f"search wicked (heuristic): best min ee-density {_rat(res['best_min_ee_density'])}, "
            f"target {_rat(res['target'])}, wicked={str(res['wicked']).lower()}")
    if args.format != "json":
        res = {k: v for k, v in res.items() if k != "instance"}
    out.report(res, text)
    return EXIT_OK


# -- report ------------------------------------------------------------------------------


def cmd_report(args, out: Output) -> int:
    text, path = _read(args.input)
    fmt = io.sniff(text)
    rows: dict[str, Any] = {"format": fmt}
    if fmt == "RH":
        doc = io.load_rh(text, path)
        A = doc.A
        rows.update({"indices": list(A.indices), "edges": A.total_edges(),
                     "min_ee_density": reduced.min_ee_density(A).to_dict(),
                     "vvv_min_density": reduced.vvv_min_density(A)})
        if len(A.indices) >= 5:
            rows["supports_k5"] = reduced.supports_clique(A, 5, args.budget)
        if doc.colouring is not None:
            rows["valid_bicolouring"] = reduced.validate_bicolouring(A, doc.colouring)
            rows["tau2"] = reduced.tau2(A, doc.colouring)
    else:
        H = io.load_h3(text, path) if fmt == "H3" else cons.psi_hypergraph(io.load_pm(text, path))
        rows.update({"n": H.n, "edges": H.m, "edge_density": edge_density(H) if H.n >= 3 else None})
        if H.n >= 5:
            rows["contains_k5"] = contains_clique(H, 5, args.budget)
    out.report(rows)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def _threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("TURANFORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _Usage(f"TURANFORGE_THREADS must be an integer (got {env!r})") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="node budget for exact searches")
    common.add_argument("--threads", type=int, default=None, help="worker threads (env TURANFORGE_THREADS)")
    common.add_argument("--timing", action="store_true", help="add wall time to JSON output")

    p = argparse.ArgumentParser(prog="turanforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build instances")
    c.add_argument("kind", choices=["psi", "ramsey", "mod3", "preimage", "nonmono", "bicoloured"])
    c.add_argument("--n", type=int)
    c.add_argument("--r", type=int, default=2)
    c.add_argument("--all", action="store_true", help="every map instead of a random one")
    c.add_argument("--emit", choices=["pm", "h3"], default="pm")
    c.add_argument("--indices", type=int, default=5)
    c.add_argument("--class-size", type=int, default=None, help="default 3 for mod3, 2 for nonmono, 12 for bicoloured")
    c.add_argument("--randomized", action="store_true")
    c.add_argument("--tau", type=_frac, default=Fraction(2, 5))
    c.add_argument("--ell", type=int, default=1)
    c.add_argument("--in", dest="input")
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", parents=[common], help="exhaustive clique checks")
    k.add_argument("what", choices=["k5free"])
    k.add_argument("--in", dest="input", default="-")
    k.add_argument("--rule", choices=["psi", "ramsey"], default="psi")
    k.add_argument("--ell", type=int, default=5)
    k.add_argument("--samples", type=int, help="check this many random maps (seeds seed..seed+N-1) instead of input")
    k.add_argument("--n", type=int, help="vertex count for --samples")
    k.set_defaults(func=cmd_check)

    m = sub.add_parser("measure", parents=[common], help="density functionals of a 3-graph")
    m.add_argument("what", choices=["links", "eedensity"])
    m.add_argument("--in", dest="input", default="-")
    m.add_argument("--mode", choices=["exhaustive", "spectral", "sampling", "EXHAUSTIVE", "SPECTRAL", "SAMPLING"],
                   default="sampling")
    m.add_argument("--d", type=_frac, default=Fraction(1, 3))
    m.add_argument("--delta", type=_frac, default=Fraction(1, 20))
    m.add_argument("--eta", type=_frac, default=Fraction(1, 50))
    m.add_argument("--samples", type=int, default=10_000)
    m.add_argument("--distinct", action="store_true", help="only pairs with distinct coordinates")
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("reduced", parents=[common], help="reduced-hypergraph predicates")
    r.add_argument("what", choices=["density", "vvv", "supports", "tau2", "inhabited"])
    r.add_argument("--in", dest="input", default="-")
    r.add_argument("--ell", type=int, default=5)
    r.add_argument("--J", type=_intlist)
    r.add_argument("--K", type=_intlist)
    r.add_argument("--L", type=_intlist)
    r.add_argument("--M", type=_intlist)
    r.set_defaults(func=cmd_reduced)

    h = sub.add_parser("holes", parents=[common], help="holes, links and cherries")
    h.add_argument("what", choices=["mu", "width", "exceptional", "bad", "relation", "qlink"])
    h.add_argument("--in", dest="input", default="-")
    h.add_argument("--family")
    h.add_argument("--other")
    h.add_argument("--transversal")
    h.add_argument("--J", type=_intlist)
    h.add_argument("--kstar", type=_intlist)
    h.add_argument("--ell", type=int)
    h.add_argument("--eps", type=_frac, default=Fraction(1, 10))
    h.add_argument("--gamma", type=_frac, default=Fraction(1, 10))
    h.add_argument("--delta", type=_frac, default=Fraction(1, 10))
    h.add_argument("--orientation", choices=["left", "middle", "right", "LEFT", "MIDDLE", "RIGHT"], default="left")
    h.set_defaults(func=cmd_holes)

    e = sub.add_parser("embed", parents=[common], help="bicoloured K5 embedding")
    e.add_argument("what", choices=["k5"])
    e.add_argument("--in", dest="input", default="-")
    e.add_argument("--eps", type=_frac, default=Fraction(1, 10))
    e.add_argument("--xi", type=_frac, default=None)
    e.add_argument("--oracle", action="store_true", help="cross-check with the exhaustive oracle")
    e.add_argument("--order", type=lambda t: t.split(","), default=None,
                   help="comma-separated label order, e.g. 14,34,24,12,13,15,45,25,35,23")
    e.set_defaults(func=cmd_embed)

    s = sub.add_parser("search", parents=[common], help="heuristic searches")
    s.add_argument("what", choices=["wicked"])
    s.add_argument("--index-size", type=int, default=5)
    s.add_argument("--class-size", type=int, default=3)
    s.add_argument("--eps", type=_frac, default=Fraction(1, 20))
    s.add_argument("--iterations", type=int, default=200)
    s.set_defaults(func=cmd_search, budget=100_000)

    rp = sub.add_parser("report", parents=[common], help="summary of an instance file")
    rp.add_argument("--in", dest="input", default="-")
    rp.set_defaults(func=cmd_report)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        args.threads = _threads(args.threads)
        return args.func(args, Output(args, stdout))
    except _Usage as exc:
        stderr.write(f"turanforge: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        stderr.write(f"turanforge: parse error: {exc}\n")
        return EXIT_PARSE
    except CapabilityError as exc:
        stderr.write(f"turanforge: capability error: {exc}\n")
        return EXIT_CAPABILITY
    except BudgetError as exc:
        stderr.write(f"turanforge: budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except TuranforgeError as exc:
        stderr.write(f"turanforge: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        stderr.write(f"turanforge: invalid argument: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
