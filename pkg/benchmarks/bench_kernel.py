"""Compare the compiled and pure-Python annealing kernels.

    python benchmarks/bench_kernel.py [--steps 2000] [--repeat 3]

Both kernels run the same restarts with the same seeds; the script checks
the results are bit-identical and reports wall time per kernel.
"""

import argparse
import time

import numpy as np

from spherical_thrackle import _backend
from spherical_thrackle.graph import AbstractGraph
from spherical_thrackle.search import EmbeddingProblem, SearchConfig, _kernel_arrays, search_embedding

GRAPHS = {
    "C4": AbstractGraph.cycle(4),
    "C7": AbstractGraph.cycle(7),
    "theta": AbstractGraph(5, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2))),
}


def time_search(kernel, g, cfg):
    t = time.perf_counter()
    out = search_embedding(EmbeddingProblem(g), cfg, kernel=kernel)
    return time.perf_counter() - t, out.as_dict()


def time_energy(kernel, g, calls):
    rng = np.random.default_rng(0)
    edges, shared = _kernel_arrays(g)
    pos = rng.standard_normal((g.n, 3))
    pos /= np.linalg.norm(pos, axis=1)[:, None]
    longf = np.zeros(g.m, dtype=np.int8)
    t = time.perf_counter()
    for _ in range(calls):
        e = kernel.full_energy(pos, longf, edges, shared, 1e-6, 1e-9, 1e-12)
    return time.perf_counter() - t, e


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--energy-calls", type=int, default=2000)
    args = ap.parse_args()
    py = _backend.get_kernel("python")
    try:
        cy = _backend.get_kernel("cython")
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return
    cfg = SearchConfig(restarts=args.restarts, steps_per_restart=args.steps, rng_seed=0)
    print(f"{'graph':8} {'what':8} {'python s':>10} {'cython s':>10} {'speedup':>8}  identical")
    for name, g in GRAPHS.items():
        tp, rp = time_search(py, g, cfg)
        tc, rc = time_search(cy, g, cfg)
        print(f"{name:8} {'anneal':8} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f}  {rp == rc}")
        tp, ep = time_energy(py, g, args.energy_calls)
        tc, ec = time_energy(cy, g, args.energy_calls)
        print(f"{name:8} {'energy':8} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f}  {ep == ec}")


if __name__ == "__main__":
    main()
