"""Compiled vs pure-Python kernels on synthetic mention graphs.

    python benchmarks/bench_kernels.py [--sizes 200 500 1000] [--repeats 3]

Each size is the number of background users; the graph timed is the
undirected projection of the ingested corpus (users, tweets, hashtags, urls).
"""
import argparse
import time

import numpy as np

from interesting_subgraphs import _pykernels
from interesting_subgraphs.graph import ingest_tweets
from interesting_subgraphs.synth import SynthSpec, generate_records

try:
    from interesting_subgraphs import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1

    header = f"{'users':>6} {'nodes':>6} {'edges':>6} {'kernel':<12} {'python s':>9} " \
             f"{'cython s':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for size in args.sizes:
        g = ingest_tweets(generate_records(SynthSpec(nodes=size, seed=1)))
        proj = g.projection()
        for name in ("brandes", "core_number"):
            py_t, py_out = best_of(getattr(_pykernels, name), (proj.indptr, proj.indices),
                                   args.repeats)
            c_t, c_out = best_of(getattr(_ckernels, name), (proj.indptr, proj.indices),
                                 args.repeats)
            pairs = zip(py_out, c_out) if isinstance(py_out, tuple) else [(py_out, c_out)]
            assert all(np.allclose(a, b) for a, b in pairs), f"{name} outputs differ"
            print(f"{size:>6} {proj.n:>6} {len(proj.pairs):>6} {name:<12} {py_t:>9.4f} "
                  f"{c_t:>9.4f} {py_t / c_t:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
