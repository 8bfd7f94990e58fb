"""Compare the numba kernels with the pure-numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Each workload runs once per
backend (the numba path is warmed up first, so compile time is excluded), and
the two backends are checked to agree before any timing is reported.
"""

import argparse
import os
import time

import numpy as np

from unit_spectra import _kernels
from unit_spectra.coloring import chromatic_exact
from unit_spectra.core import preset_weights
from unit_spectra.families import HyperflowerSpec, make_hyperflower, random_simple_connected
from unit_spectra.fixtures import load
from unit_spectra.metrics import clique_number, unit_graph
from unit_spectra.units import compute_units
from unit_spectra.walk import WalkModel, simulate_first_hits


def _set_backend(name):
    if name == "numpy":
        os.environ[_kernels.ENV_FLAG] = "1"
    else:
        os.environ.pop(_kernels.ENV_FLAG, None)


def workload_walk(runs):
    H = load("fig1")
    model = WalkModel.build(H, preset_weights(H, "B"))
    return simulate_first_hits(model, "5", "1", 30, runs, seed=42)


_GRAPHS = []


def workload_coloring(count):
    rng = np.random.Generator(np.random.PCG64(7))
    while len(_GRAPHS) < count:
        _GRAPHS.append(random_simple_connected(rng, n_max=18, m_max=16))
    return [chromatic_exact(H) for H in _GRAPHS[:count]]


def workload_clique(count):
    # unit graphs of hyperflowers, plus dense random graphs on 48 vertices
    out = []
    for l, r in [(3, 3), (4, 4)]:
        H, _ = make_hyperflower(HyperflowerSpec(l, r, 2, 2))
        out.append(clique_number(unit_graph(H, compute_units(H))))
    rng = np.random.Generator(np.random.PCG64(11))
    for _ in range(count):
        A = np.triu(rng.random((48, 48)) < 0.6, 1)
        A = A | A.T
        out.append(_kernels.max_clique_size([sum(1 << int(j) for j in np.flatnonzero(row)) for row in A]))
    return out


def timed(fn, arg, repeat):
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(arg)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=100_000, help="walk samples")
    ap.add_argument("--graphs", type=int, default=40, help="random colouring instances")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path can run")
        return

    workloads = [
        ("walk first hits", workload_walk, args.runs),
        ("exact colouring", workload_coloring, args.graphs),
        ("max clique", workload_clique, 10),
    ]
    print(f"{'workload':<18}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, fn, arg in workloads:
        _set_backend("numba")
        fn(min(arg, 10))  # compile
        t_nb, r_nb = timed(fn, arg, args.repeat)
        _set_backend("numpy")
        t_np, r_np = timed(fn, arg, args.repeat)
        _set_backend("numba")
        assert np.array_equal(np.asarray(r_nb), np.asarray(r_np)), f"{name}: backends disagree"
        print(f"{name:<18}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
