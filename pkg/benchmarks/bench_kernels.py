"""Compiled kernels against their plain-Python bodies.

    python benchmarks/bench_kernels.py            # in-process kernel timings
    python benchmarks/bench_kernels.py --e2e      # also time whole workloads per backend

Kernel rows call the numba function and its ``py_func`` on identical inputs
and check the answers match.  The end-to-end rows rerun one workload in a
subprocess with and without ``TURANFORGE_NO_NUMBA``.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time
import numpy as np

from turanforge import constructions as cons
from turanforge import kernels
from turanforge._accel import backend_name
from turanforge.hypercore import Hypergraph3, link_graph


def best_of(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def kernel_rows(repeat):
    rows = []
    # clique search on a K5-free instance: the search must exhaust the tree
    H = cons.psi_hypergraph(cons.random_pairmap(40, 3, 0))
    adj = H.adj
    fast = lambda: kernels.clique_search(adj, H.n, 5, -1)[0]
    slow = lambda: kernels.clique_search.py_func(adj, H.n, 5, -1)[0]
    rows.append(("clique_search psi n=40 ell=5", fast, slow, None))

    # all 2^n subsets of one link graph
    n = 16
    G = link_graph(cons.psi_hypergraph(cons.random_pairmap(n, 3, 1)), 0)
    mask = np.array([sum(1 << int(u) for u in np.flatnonzero(G.matrix[v])) for v in range(n)], dtype=np.int64)
    fast = lambda: kernels.gray_max_deviation(mask, n, 1, 3)[0]
    slow = lambda: kernels.gray_max_deviation.py_func(mask, n, 1, 3)[0]
    vec = lambda: kernels.gray_max_deviation_numpy(mask, n, 1, 3)[0]
    rows.append((f"subset deviation n={n}", fast, slow, vec))

    edges = Hypergraph3.complete(60).edges
    fast = lambda: int(kernels.build_pair_adjacency(edges, 60, 1).sum())
    slow = lambda: int(kernels.build_pair_adjacency.py_func(edges, 60, 1).sum())
    rows.append(("pair adjacency K_60", fast, slow, None))

    out = []
    for name, fast, slow, vec in rows:
        fast()  # compile
        a, tf = best_of(fast, repeat)
        b, ts = best_of(slow, 1)
        rec = {"kernel": name, "compiled_s": tf, "python_s": ts, "speedup": ts / tf if tf else None,
               "agree": bool(a == b)}
        if vec is not None:
            c, tv = best_of(vec, repeat)
            rec["numpy_s"] = tv
            rec["agree"] = rec["agree"] and bool(c == a)
        out.append(rec)
    return out


E2E = r"""
import time
from turanforge import backend_name, constructions as cons
from turanforge.hypercore import contains_clique
from turanforge.reduced import supports_clique
t0 = time.perf_counter()
v = sum(contains_clique(cons.psi_hypergraph(cons.random_pairmap(60, 3, s)), 5).found for s in range(3))
hits = sum(supports_clique(cons.random_reduced(7, (3, 4), 0.45, s), 5).found for s in range(10))
print(backend_name(), v, hits, time.perf_counter() - t0)
"""


def e2e_rows():
    out = []
    for flag in ("0", "1"):
        env = dict(os.environ, TURANFORGE_NO_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        name, v, hits, secs = proc.stdout.split()
        out.append({"backend": name, "violations": int(v), "supported": int(hits), "seconds": float(secs)})
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--e2e", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if backend_name() != "numba":
        print("numba disabled; both columns run the same Python code", file=sys.stderr)
    rows = kernel_rows(args.repeat)
    e2e = e2e_rows() if args.e2e else []
    if args.json:
        print(json.dumps({"kernels": rows, "end_to_end": e2e}, indent=2))
        return
    print(f"{'kernel':32} {'numba s':>10} {'python s':>10} {'numpy s':>10} {'speedup':>9}  agree")
    for r in rows:
        np_s = f"{r['numpy_s']:10.4f}" if "numpy_s" in r else f"{'-':>10}"
        print(f"{r['kernel']:32} {r['compiled_s']:10.4f} {r['python_s']:10.4f} {np_s} {r['speedup']:9.1f}  {r['agree']}")
    for r in e2e:
        print(f"end-to-end [{r['backend']}]: {r['seconds']:.2f}s "
              f"(violations {r['violations']}, supported {r['supported']})")


if __name__ == "__main__":
    main()
