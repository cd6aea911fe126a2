"""Compare the numba and numpy kernel backends.

Each backend runs in its own interpreter (the backend is fixed at import),
timing the two kernels directly and kappa end to end on the flype family.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from kappakh import kernels
from kappakh.braid import flype_pair
from kappakh.complex import masks_of_weight
from kappakh.f2linalg import Eliminator, SparseMatrixF2

repeat = int(sys.argv[1])

def best(fn):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

A, B = flype_pair(2, 2)
letters = np.array(A.letters, dtype=np.int64)
masks = masks_of_weight(A.c, A.n_minus)
rng = np.random.default_rng(0)
n_rows, n_cols = 3000, 2500
rows = rng.integers(0, n_rows, size=12 * n_cols)
cols = np.repeat(np.arange(n_cols), 12)
M = SparseMatrixF2.from_coo(n_rows, n_cols, rows, cols)

def eliminate():
    e = Eliminator(n_rows)
    e.append(M)

def kappa_family():
    from kappakh.complex import closed
    from kappakh.invariants import kappa
    closed.cache_clear()
    for a in range(3):
        for b in range(3):
            for w in flype_pair(a, b):
                kappa(w)

print(json.dumps({
    "backend": kernels.BACKEND,
    "circle_labels": best(lambda: kernels.circle_labels(letters, A.n, masks)),
    "eliminate": best(eliminate),
    "kappa_flypes": best(kappa_family),
    "resolutions": int(masks.size),
}))
"""


def run_backend(name: str, repeat: int) -> dict:
    env = dict(os.environ, KAPPAKH_BACKEND=name)
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    results = [run_backend(name, args.repeat) for name in ("numba", "numpy")]
    if results[0]["backend"] != "numba":
        print("numba is not importable; both rows use the numpy fallback")
    print(f"circle_labels over {results[0]['resolutions']} resolutions of A(2,2); "
          "elimination of a 3000x2500 sparse matrix; kappa of all 18 flype braids")
    print(f"{'backend':<8} {'circles (ms)':>13} {'eliminate (ms)':>15} {'kappa (s)':>10}")
    for r in results:
        print(f"{r['backend']:<8} {1e3 * r['circle_labels']:>13.2f} {1e3 * r['eliminate']:>15.2f} "
              f"{r['kappa_flypes']:>10.2f}")


if __name__ == "__main__":
    main()
