#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on synthetic workloads under both backends,
checks they agree, and prints per-kernel timings plus an end-to-end
pipeline timing.  Usage:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import metascene as ms
import metascene.sim.kernels.numba_impl as knb
import metascene.sim.kernels.numpy_impl as knp
from metascene.rng import SplitMix64
from metascene.sim.octree import build_octree

SEED = np.uint64(42)


def cloud(n, seed=3, spread=40.0):
    rng = SplitMix64(seed)
    return np.array([[rng.uniform(-spread, spread) for _ in range(3)] for _ in range(n)])


def timeit(fn, repeat):
    fn()  # warm (JIT compile / allocate)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_springs(repeat, n_links=20_000):
    pos = cloud(n_links + 1)
    lf = np.arange(0, n_links, dtype=np.int64)
    lt = np.arange(1, n_links + 1, dtype=np.int64)
    rest = np.full(n_links, 2.0)
    stiff = np.full(n_links, 0.7)
    out = {}
    for name, impl in (("numpy", knp), ("numba", knb)):
        acc = np.zeros_like(pos)
        out[name] = timeit(lambda: impl.spring_forces(acc, pos, lf, lt, rest, stiff, SEED), repeat)
    check_a = np.zeros_like(pos)
    check_b = np.zeros_like(pos)
    knp.spring_forces(check_a, pos, lf, lt, rest, stiff, SEED)
    knb.spring_forces(check_b, pos, lf, lt, rest, stiff, SEED)
    assert np.allclose(check_a, check_b, atol=1e-9)
    return f"spring forces ({n_links} links)", out


def bench_exact_charge(repeat, n=400):
    pos = cloud(n)
    q = np.full(n, -30.0)
    targets = np.arange(n, dtype=np.int64)
    out = {}
    for name, impl in (("numpy", knp), ("numba", knb)):
        acc = np.zeros_like(pos)
        out[name] = timeit(
            lambda: impl.charge_forces_exact(acc, pos, q, targets, 1.0, 0.1, SEED), repeat)
    return f"exact charge ({n} nodes, O(n^2))", out


def bench_bh(repeat, n=2000):
    pos = cloud(n)
    q = np.full(n, -30.0)
    targets = np.arange(n, dtype=np.int64)
    tree = build_octree(pos, q, targets)
    out = {}
    for name, impl in (("numpy", knp), ("numba", knb)):
        acc = np.zeros_like(pos)
        out[name] = timeit(
            lambda: impl.charge_forces_bh(acc, pos, q, targets, 0.5, 1.0, 0.1, SEED, tree),
            repeat)
    check_a = np.zeros_like(pos)
    check_b = np.zeros_like(pos)
    knp.charge_forces_bh(check_a, pos, q, targets, 0.5, 1.0, 0.1, SEED, tree)
    knb.charge_forces_bh(check_b, pos, q, targets, 0.5, 1.0, 0.1, SEED, tree)
    assert np.allclose(check_a, check_b, atol=1e-8)
    return f"Barnes-Hut charge ({n} nodes, theta=0.5)", out


def bench_collisions(repeat, n=1500):
    pos = cloud(n, spread=8.0)
    pi, pj = np.triu_indices(n, k=1)
    keep = np.linalg.norm(pos[pi] - pos[pj], axis=1) < 1.0
    pi = pi[keep].astype(np.int64)
    pj = pj[keep].astype(np.int64)
    radius = np.full(n, 0.25)
    mass = np.ones(n)
    movable = np.ones(n, dtype=bool)
    out = {}
    for name, impl in (("numpy", knp), ("numba", knb)):
        work = pos.copy()
        out[name] = timeit(
            lambda: impl.collision_pass(work, pi, pj, radius, mass, movable, SEED), repeat)
    return f"collision pass ({pi.size} candidate pairs)", out


def bench_pipeline(repeat):
    doc = ms.generate_synthetic(57, 212, 21, 5, seed=42)
    out = {"numba" if ms.backend_name == "numba" else "numpy":
           timeit(lambda: ms.simulate_scene(doc), max(1, repeat // 2))}
    return f"full pipeline, UNITEN scale (active backend: {ms.backend_name})", out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rows = [
        bench_springs(args.repeat),
        bench_exact_charge(args.repeat),
        bench_bh(args.repeat),
        bench_collisions(args.repeat),
        bench_pipeline(args.repeat),
    ]
    width = max(len(name) for name, _ in rows) + 2
    print(f"{'kernel':<{width}} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, res in rows:
        np_t = res.get("numpy")
        nb_t = res.get("numba")
        np_s = f"{np_t * 1e3:10.2f}ms" if np_t else f"{'-':>12}"
        nb_s = f"{nb_t * 1e3:10.2f}ms" if nb_t else f"{'-':>12}"
        speed = f"{np_t / nb_t:8.1f}x" if np_t and nb_t else f"{'-':>9}"
        print(f"{name:<{width}} {np_s} {nb_s} {speed}")


if __name__ == "__main__":
    main()
