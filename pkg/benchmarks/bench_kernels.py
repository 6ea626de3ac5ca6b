"""Timing of the row-reduction kernels: compiled, numpy fallback and sparse dicts.

    python benchmarks/bench_kernels.py [--sizes 100 200 400] [--repeat 3]

Every run also checks that the backends return the same echelon form.
"""

import argparse
import time

import numpy as np

from gradedlie import kernels
from gradedlie.algebra import build_enveloping
from gradedlie.fixtures import abelian, one_relator
from gradedlie.homology import betti_table
from gradedlie.linalg import PrimeField, _rref_sparse
from gradedlie.products import free_product_lie, mayer_vietoris_check, split_generators


def random_matrix(n, m, p, fill, rng):
    a = np.zeros((n, m), dtype=np.int64)
    mask = rng.random((n, m)) < fill
    a[mask] = rng.integers(1, p, size=int(mask.sum()))
    return a


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_dense(sizes, p, fill, repeat, sparse_limit):
    rng = np.random.default_rng(0)
    F = PrimeField(p)
    print(f"dense rref mod {p}, fill {fill}")
    print(f"{'size':>6} {'compiled':>10} {'numpy':>10} {'sparse':>10} {'speedup':>8}")
    for n in sizes:
        a = random_matrix(n, n, p, fill, rng)
        res = {}
        times = {}
        for name in kernels.available():
            t, b = best_of(lambda: _run(a, p, name), repeat)
            times[name], res[name] = t, b
        if n <= sparse_limit:
            rows = [{int(k): int(a[i, k]) for k in np.flatnonzero(a[i])} for i in range(n)]
            times["sparse"], sp = best_of(lambda: _rref_sparse(F, rows), 1)
            ref = res["python"]
            dense_rows = [{int(k): int(ref[1][i, k]) for k in np.flatnonzero(ref[1][i])} for i in range(ref[0])]
            assert sorted(map(lambda r: sorted(r.items()), sp[0])) == sorted(map(lambda r: sorted(r.items()), dense_rows))
        if "compiled" in res:
            assert res["compiled"][0] == res["python"][0]
            assert np.array_equal(res["compiled"][1], res["python"][1])
        c = times.get("compiled")
        speed = f"{times['python'] / c:8.1f}" if c else "       -"
        fmt = lambda k: f"{times[k]:10.4f}" if k in times else f"{'-':>10}"
        print(f"{n:>6} {fmt('compiled')} {fmt('python')} {fmt('sparse')} {speed}")


def _run(a, p, name):
    b = a.copy()
    rk = kernels.rref_dense_modp(b, p, backend=name)
    return rk, b


def _with_backend(name, fn):
    if name == "sparse-only":
        old = kernels.set_dense(False)
        prev = None
    else:
        old = kernels.set_dense(True)
        prev = kernels.set_backend(name)
    try:
        return fn()
    finally:
        kernels.set_dense(old)
        if prev is not None:
            kernels.set_backend(prev)


def bench_workloads(repeat):
    F = PrimeField(32003)

    def betti():
        return betti_table(build_enveloping(one_relator(2, F, 6))).diagonal()

    def mv():
        P, Q = one_relator(2, F, 5), abelian(2, F, 5)
        U = build_enveloping(free_product_lie(P, Q))
        return mayer_vietoris_check(U, *split_generators(P, Q)).ok

    for label, job in (("betti U(one_relator(2)), N = 6", betti), ("mayer-vietoris one_relator(2) * abelian(2), N = 5", mv)):
        print(label)
        for name in kernels.available() + ["sparse-only"]:
            t, out = best_of(lambda: _with_backend(name, job), repeat)
            print(f"  {name:<12} {t:8.3f}s  {out}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--fill", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sparse-limit", type=int, default=200)
    args = ap.parse_args()
    print(f"backends: {kernels.available()}, active {kernels.BACKEND}")
    bench_dense(args.sizes, args.prime, args.fill, args.repeat, args.sparse_limit)
    bench_workloads(args.repeat)


if __name__ == "__main__":
    main()
