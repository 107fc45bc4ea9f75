"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Micro rows time one kernel call; workload rows time whole library calls
with the kernels module patched to one backend.
"""
import argparse
import random
import timeit
from contextlib import contextmanager

from branchdepth import kernels
from branchdepth.algebra import field_build
from branchdepth.decomposition import decompose
from branchdepth.exact import branch_depth_exact
from branchdepth.forest import roundtrip_check
from branchdepth.graph import complete_graph
from branchdepth.matroid import GraphicMatroid, LinearMatroid, circuit_matroid


@contextmanager
def backend(module):
    saved = kernels.gf_rank, kernels.leaf_search
    kernels.gf_rank, kernels.leaf_search = module.gf_rank, module.leaf_search
    try:
        yield
    finally:
        kernels.gf_rank, kernels.leaf_search = saved


def random_vectors(q, rows, cols, seed):
    rng = random.Random(seed)
    return [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)]


def micro_cases():
    cases = []
    for q, size in ((2, 24), (3, 16), (4, 16), (7, 12)):
        F = field_build(q)
        vecs = random_vectors(q, size, size, q)
        cases.append((f"gf_rank GF({q}) {size}x{size}",
                      lambda m, v=vecs, F=F: m.gf_rank(v, F.q, F.add, F.mul, F.neg, F.inv)))
    return cases


def workload_cases():
    # fresh matroids per call so rank caches do not carry over between runs
    c8 = circuit_matroid(8)
    rng = random.Random(1)
    lin = LinearMatroid.from_rows(3, [[rng.randrange(3) for _ in range(12)] for _ in range(4)])
    D = decompose(lin)
    return [
        ("branch_depth_exact K6", lambda: branch_depth_exact(GraphicMatroid(complete_graph(6)))),
        ("branch_depth_exact C8", lambda: branch_depth_exact(c8)),
        ("forest roundtrip GF(3) 4x12", lambda: roundtrip_check(LinearMatroid(lin.field, lin.columns), D)),
    ]


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.2 and number < 10**6:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = kernels.compiled_kernels
    if compiled is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'case':34} {'python':>12} {'compiled':>12} {'speedup':>8}")
    rows = []
    for name, fn in micro_cases():
        rows.append((name, best_of(lambda: fn(kernels.python_kernels), args.repeat),
                     None if compiled is None else best_of(lambda: fn(compiled), args.repeat)))
    for name, fn in workload_cases():
        with backend(kernels.python_kernels):
            py = best_of(fn, args.repeat)
        c = None
        if compiled is not None:
            with backend(compiled):
                c = best_of(fn, args.repeat)
        rows.append((name, py, c))
    for name, py, c in rows:
        if c is None:
            print(f"{name:34} {py * 1e3:10.3f}ms {'-':>12} {'-':>8}")
        else:
            print(f"{name:34} {py * 1e3:10.3f}ms {c * 1e3:10.3f}ms {py / c:7.1f}x")


if __name__ == "__main__":
    main()
