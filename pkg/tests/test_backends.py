"""Both kernel backends implement the same semantics; the env flag picks
one.  Agreement is to floating-point tolerance (vectorized reductions
associate differently), while each backend alone is bit-deterministic.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

import metascene.sim.kernels.numpy_impl as knp
from metascene.rng import SplitMix64, pair_angle
from metascene.sim.octree import build_octree

knb = pytest.importorskip("metascene.sim.kernels.numba_impl")


def cloud(n, seed, spread=15.0):
    rng = SplitMix64(seed)
    pos = np.array([[rng.uniform(-spread, spread) for _ in range(3)] for _ in range(n)])
    return pos


def test_jitter_hash_matches_python():
    for seed in (0, 42, 2**63, 2**64 - 1):
        for i, j in ((0, 1), (7, 3), (100, 100), (12345, 2)):
            assert knb._pair_angle(np.uint64(seed), i, j) == pair_angle(seed, i, j)


def test_spring_forces_agree():
    pos = cloud(40, 3)
    lf = np.arange(0, 39, dtype=np.int64)
    lt = np.arange(1, 40, dtype=np.int64)
    rest = np.full(39, 2.0)
    stiff = np.full(39, 0.7)
    a = np.zeros_like(pos)
    b = np.zeros_like(pos)
    knp.spring_forces(a, pos, lf, lt, rest, stiff, 42)
    knb.spring_forces(b, pos, lf, lt, rest, stiff, 42)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_exact_charge_agrees():
    pos = cloud(60, 5)
    q = np.full(60, -30.0)
    targets = np.arange(60, dtype=np.int64)
    a = np.zeros_like(pos)
    b = np.zeros_like(pos)
    knp.charge_forces_exact(a, pos, q, targets, 1.0, 0.1, 42)
    knb.charge_forces_exact(b, pos, q, targets, 1.0, 0.1, 42)
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)


def test_bh_agrees():
    pos = cloud(120, 11)
    q = np.full(120, -30.0)
    targets = np.arange(120, dtype=np.int64)
    tree = build_octree(pos, q, targets)
    a = np.zeros_like(pos)
    b = np.zeros_like(pos)
    knp.charge_forces_bh(a, pos, q, targets, 0.5, 1.0, 0.1, 42, tree)
    knb.charge_forces_bh(b, pos, q, targets, 0.5, 1.0, 0.1, 42, tree)
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)


def test_collision_pass_bit_identical():
    pos_a = cloud(30, 7, spread=1.0)
    pos_b = pos_a.copy()
    pi, pj = np.triu_indices(30, k=1)
    pi = pi.astype(np.int64)
    pj = pj.astype(np.int64)
    radius = np.full(30, 0.25)
    mass = np.ones(30)
    movable = np.ones(30, dtype=bool)
    knp.collision_pass(pos_a, pi, pj, radius, mass, movable, 42)
    knb.collision_pass(pos_b, pi, pj, radius, mass, movable, 42)
    assert np.array_equal(pos_a, pos_b)
    ra = knp.collision_residual(pos_a, pi, pj, radius)
    rb = knb.collision_residual(pos_b, pi, pj, radius)
    assert ra == rb


def test_grouping_and_room_repulsion_agree():
    pos = cloud(20, 9)
    pi = np.arange(0, 10, dtype=np.int64)
    pj = np.arange(10, 20, dtype=np.int64)
    a = np.zeros_like(pos)
    b = np.zeros_like(pos)
    knp.grouping_forces(a, pos, pi, pj, 0.05)
    knb.grouping_forces(b, pos, pi, pj, 0.05)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)
    a[:] = 0.0
    b[:] = 0.0
    knp.room_repulsion_forces(a, pos, pi, pj, 200.0, 42)
    knb.room_repulsion_forces(b, pos, pi, pj, 200.0, 42)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def _run_backend_probe(backend):
    env = dict(os.environ, METASCENE_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c",
         "import metascene; print(metascene.backend_name)"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_backend():
    assert _run_backend_probe("numpy") == "numpy"
    assert _run_backend_probe("numba") == "numba"
    assert _run_backend_probe("auto") in ("numba", "numpy")


def test_full_run_agreement_across_backends(tmp_path):
    """End-to-end: the same document simulated under each backend lands
    on the same layout to within nanometers."""
    script = (
        "import metascene as ms, json, sys\n"
        "doc = ms.generate_synthetic(6, 18, 2, 2, seed=5)\n"
        "scene, _ = ms.simulate_scene(doc)\n"
        "json.dump([n.position for n in scene.nodes], sys.stdout)\n"
    )
    results = []
    for backend in ("numpy", "numba"):
        env = dict(os.environ, METASCENE_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", script],
                             capture_output=True, text=True, env=env, check=True)
        results.append(np.array(eval(out.stdout)))
    np.testing.assert_allclose(results[0], results[1], atol=1e-7)
