"""Compare the numba and numpy kernel backends.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is called once
to trigger compilation, then timed over several repetitions.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from freebycyclic import _kernels as K
from freebycyclic.automorphisms import fingerprint, make_automorphism
from freebycyclic.congruence import enumerate_finite_quotients
from freebycyclic.finite_groups import symmetric
from freebycyclic.torus import MappingTorus


def _time(fn, repeat: int) -> float:
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    G = symmetric(4)
    rng = np.random.default_rng(0)
    images = rng.integers(0, G.order, size=(20000, 2)).astype(np.int64)
    letters = rng.choice([1, -1, 2, -2], size=24).astype(np.int64)
    tuples = rng.integers(0, G.order, size=(5000, 2)).astype(np.int64)
    gens = np.asarray(G.generating_set, dtype=np.int64)
    swap = make_automorphism(["b", "a"])
    theta_rot = make_automorphism(["bA", "A"])
    return {
        "eval_words (20k x 24 letters, S4)": lambda: K.eval_words(G.table, G.inverse, images, letters),
        "generated_sizes (5k pairs, S4)": lambda: K.generated_sizes(G.table, tuples),
        "conjugacy_labels (S4)": lambda: K.conjugacy_labels(G.table, G.inverse),
        "is_associative (S4)": lambda: K.is_associative(G.table),
        "extend_hom (S4)": lambda: K.extend_hom(G.table, gens, gens),
        "fingerprint (theta rotation)": lambda: fingerprint(theta_rot),
        "quotients of swap torus, order <= 48": lambda: list(enumerate_finite_quotients(MappingTorus(swap), 48)),
    }


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    rows = []
    for name, fn in workloads().items():
        times = {}
        for backend in ("numpy", "numba"):
            K.set_backend(backend)
            times[backend] = _time(fn, args.repeat)
        rows.append((name, times["numpy"], times["numba"]))
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numpy ms':>10}  {'numba ms':>10}  {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<{width}}  {t_np * 1e3:10.3f}  {t_nb * 1e3:10.3f}  {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
