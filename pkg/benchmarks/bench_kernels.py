"""Compare the compiled row reduction kernels with the pure-Python fallback.

Two levels:

* ``kernels``: ``rref_modp`` and ``rref_int`` on random dense matrices,
  calling both implementations directly in this process;
* ``workload``: a fixed end-to-end workload (witness pages and the RLP
  cross-check on seeded random objects), run in a subprocess once per
  backend so that the selection at import time takes effect.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

from mspectra import _kernels_py

try:
    from mspectra import _ckernels
except ImportError:  # extension not built
    _ckernels = None


WORKLOAD = r"""
import time
from mspectra import kernels
from mspectra.linalg import GF, QQ
from mspectra.model import acyclic_fibration_crosscheck
from mspectra.randgen import make_rng, random_morphism, random_multicomplex
from mspectra.spectral import FIRST, classical_pages, page

t = time.perf_counter()
rng = make_rng("bench")
for n in range(60):
    A = random_multicomplex(rng, 4, QQ if n % 2 else GF(5))
    for r in range(4):
        page(A, FIRST, r)
        classical_pages(A, r)
for n in range(60):
    acyclic_fibration_crosscheck(random_morphism(rng, 4, QQ if n % 2 else GF(5)), 1, 1)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def _random_rows(rng, rows, cols, lo, hi, density):
    return [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_kernels(repeat):
    rng = random.Random(0)
    cases = [
        ("modp 40x40 p=5", "modp", _random_rows(rng, 40, 40, 0, 4, 0.5), 40, 5),
        ("modp 150x120 p=101", "modp", _random_rows(rng, 150, 120, 0, 100, 0.3), 120, 101),
        ("int 25x25", "int", _random_rows(rng, 25, 25, -3, 3, 0.5), 25, None),
        ("int 60x50 sparse", "int", _random_rows(rng, 60, 50, -2, 2, 0.15), 50, None),
    ]
    out = []
    for name, kind, rows, ncols, p in cases:
        impls = {"python": _kernels_py}
        if _ckernels is not None:
            impls["cython"] = _ckernels
        res = {}
        answers = []
        for label, mod in impls.items():
            if kind == "modp":
                call = lambda m=mod: m.rref_modp([list(r) for r in rows], ncols, p)
            else:
                call = lambda m=mod: m.rref_int([list(r) for r in rows], ncols)
            answers.append(call())
            res[label] = _time(call, repeat)
        out.append({"case": name, "seconds": res, "same_result": all(a == answers[0] for a in answers)})
    return out


def bench_workload():
    out = {}
    for label, env in (("cython", {}), ("python", {"MSPECTRA_PURE": "1"})):
        proc = subprocess.run(
            [sys.executable, "-c", WORKLOAD],
            env={**os.environ, **env},
            capture_output=True,
            text=True,
            check=True,
        )
        backend, secs = proc.stdout.split()
        out[label] = {"backend": backend, "seconds": float(secs)}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    report = {"kernels": bench_kernels(args.repeat), "workload": bench_workload()}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    for row in report["kernels"]:
        secs = row["seconds"]
        line = f"{row['case']:22s} python {secs['python'] * 1e3:9.2f} ms"
        if "cython" in secs:
            line += f"   cython {secs['cython'] * 1e3:9.2f} ms   speedup {secs['python'] / secs['cython']:6.1f}x"
        print(line + ("" if row["same_result"] else "   RESULTS DIFFER"))
    w = report["workload"]
    for label, v in w.items():
        print(f"workload ({label:6s} requested, {v['backend']} loaded): {v['seconds']:.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
