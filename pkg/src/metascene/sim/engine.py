"""Velocity Verlet particle engine with alpha cooling.

One tick:

    x  <- x + v dt + 1/2 a dt^2
    a' <- alpha * F(x) / m          (kernels summed in fixed order)
    v  <- (v + 1/2 (a + a') dt) * velocity_decay
    floor pinning, collision resolution
    tick <- tick + 1;  alpha <- alpha0 (1 - alpha_decay)^tick

Convergence is alpha < alpha_min or tick >= max_ticks.  Everything is a
pure function of (graph, config) including the seed, so trajectories are
bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import Config
from ..errors import NonFiniteStateError
from ..rng import MASK64, SplitMix64
from .graph import SimGraph
from .kernels import impl as K
from .octree import build_octree

INIT_DISC_RADIUS_M = 30.0
CHARGE_CONSTANT = 1.0        # k_c in the charge kernel
CHARGE_MIN_DISTANCE_M = 0.1  # r_min clamp in the charge kernel
COLLISION_TOLERANCE_M = 1e-6
_EXTRA_COLLISION_PASS_CAP = 256
_DIVERGENCE_BOUND_M = 1e18


def _seed64(config: Config) -> np.uint64:
    return np.uint64(config.seed & MASK64)


@dataclass
class SimulationState:
    positions: np.ndarray      # (n, 3) meters
    velocities: np.ndarray     # (n, 3) m per tick
    accelerations: np.ndarray  # (n, 3) m per tick^2
    alpha: float
    tick: int
    converged: bool

    def copy(self) -> "SimulationState":
        return SimulationState(
            positions=self.positions.copy(),
            velocities=self.velocities.copy(),
            accelerations=self.accelerations.copy(),
            alpha=self.alpha,
            tick=self.tick,
            converged=self.converged,
        )


def init_positions(graph: SimGraph, config: Config) -> SimulationState:
    """Seeded random start: uniform in a 30 m horizontal disc per floor,
    y pinned to the node's floor plane, hard anchors placed exactly."""
    ga = graph.arrays()
    n = graph.node_count()
    rng = SplitMix64(config.seed)
    pos = np.zeros((n, 3), dtype=np.float64)
    for i in range(n):
        u1 = rng.next_float()
        u2 = rng.next_float()
        r = INIT_DISC_RADIUS_M * np.sqrt(u1)
        phi = 2.0 * np.pi * u2
        pos[i, 0] = r * np.cos(phi)
        pos[i, 1] = ga.pinned_y[i]
        pos[i, 2] = r * np.sin(phi)
    if ga.hard_idx.size:
        pos[ga.hard_idx] = ga.hard_pos
    return SimulationState(
        positions=pos,
        velocities=np.zeros((n, 3), dtype=np.float64),
        accelerations=np.zeros((n, 3), dtype=np.float64),
        alpha=config.alpha0,
        tick=0,
        converged=False,
    )


def accumulate_link_forces(graph: SimGraph, state: SimulationState, config: Config) -> np.ndarray:
    ga = graph.arrays()
    acc = np.zeros_like(state.positions)
    K.spring_forces(acc, state.positions, ga.link_from, ga.link_to,
                    ga.link_rest, ga.link_stiff, _seed64(config))
    return acc


def accumulate_charge_forces(
    graph: SimGraph, state: SimulationState, config: Config, theta: float | None = None
) -> np.ndarray:
    ga = graph.arrays()
    acc = np.zeros_like(state.positions)
    if theta is None:
        theta = config.theta
    targets = ga.charged_idx
    if targets.size < 2:
        return acc
    if theta > 0.0:
        tree = build_octree(state.positions, ga.charge, targets)
        K.charge_forces_bh(acc, state.positions, ga.charge, targets, theta,
                           CHARGE_CONSTANT, CHARGE_MIN_DISTANCE_M, _seed64(config), tree)
    else:
        K.charge_forces_exact(acc, state.positions, ga.charge, targets,
                              CHARGE_CONSTANT, CHARGE_MIN_DISTANCE_M, _seed64(config))
    return acc


def accumulate_grouping_forces(graph: SimGraph, state: SimulationState, config: Config) -> np.ndarray:
    ga = graph.arrays()
    acc = np.zeros_like(state.positions)
    K.grouping_forces(acc, state.positions, ga.group_i, ga.group_j,
                      config.same_room_attraction_k)
    return acc


def accumulate_room_repulsion(graph: SimGraph, state: SimulationState, config: Config) -> np.ndarray:
    ga = graph.arrays()
    acc = np.zeros_like(state.positions)
    K.room_repulsion_forces(acc, state.positions, ga.roompair_i, ga.roompair_j,
                            config.room_repulsion_k, _seed64(config))
    return acc


def accumulate_floor_repulsion(graph: SimGraph, state: SimulationState, config: Config) -> np.ndarray:
    """Zero unless floor repulsion is enabled and pinning is off;
    pinning makes the force redundant."""
    ga = graph.arrays()
    acc = np.zeros_like(state.positions)
    if config.floor_repulsion_enabled and not config.floor_pinning_enabled:
        K.floor_repulsion_forces(acc, state.positions, ga.level, config.floor_repulsion_k)
    return acc


def _total_forces(graph: SimGraph, state: SimulationState, config: Config) -> np.ndarray:
    """All force kernels into one accumulator, in a fixed order:
    links, charge, grouping, room repulsion, floor repulsion, anchors."""
    ga = graph.arrays()
    pos = state.positions
    acc = np.zeros_like(pos)
    K.spring_forces(acc, pos, ga.link_from, ga.link_to, ga.link_rest, ga.link_stiff, _seed64(config))
    targets = ga.charged_idx
    if targets.size >= 2:
        if config.theta > 0.0:
            tree = build_octree(pos, ga.charge, targets)
            K.charge_forces_bh(acc, pos, ga.charge, targets, config.theta,
                               CHARGE_CONSTANT, CHARGE_MIN_DISTANCE_M, _seed64(config), tree)
        else:
            K.charge_forces_exact(acc, pos, ga.charge, targets,
                                  CHARGE_CONSTANT, CHARGE_MIN_DISTANCE_M, _seed64(config))
    K.grouping_forces(acc, pos, ga.group_i, ga.group_j, config.same_room_attraction_k)
    K.room_repulsion_forces(acc, pos, ga.roompair_i, ga.roompair_j,
                            config.room_repulsion_k, _seed64(config))
    if config.floor_repulsion_enabled and not config.floor_pinning_enabled:
        K.floor_repulsion_forces(acc, pos, ga.level, config.floor_repulsion_k)
    K.anchor_forces(acc, pos, ga.anchor_idx, ga.anchor_pos, config.anchor_stiffness)
    return acc


def apply_floor_pinning(graph: SimGraph, state: SimulationState) -> SimulationState:
    """Snap every node's y to its floor plane and zero vertical velocity;
    hard anchors snap fully with all velocity zeroed."""
    ga = graph.arrays()
    state.positions[:, 1] = ga.pinned_y
    state.velocities[:, 1] = 0.0
    _snap_hard_anchors(ga, state)
    return state


def _snap_hard_anchors(ga, state: SimulationState) -> None:
    if ga.hard_idx.size:
        state.positions[ga.hard_idx] = ga.hard_pos
        state.velocities[ga.hard_idx] = 0.0


def collision_pairs(positions: np.ndarray, radius: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Broad phase: uniform spatial hash with cell size 2 * max radius.

    Returns candidate index pairs (i < j), sorted, both radii > 0, from
    the 27-cell neighborhoods of the hash grid.
    """
    eligible = np.nonzero(radius > 0.0)[0]
    m = eligible.size
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    if m < 2:
        return empty
    cell_size = 2.0 * float(radius[eligible].max())
    fcells = np.floor(positions[eligible] / cell_size)
    bias = np.int64(1) << 20
    if np.any(np.abs(fcells) >= float(bias)):
        # Coordinates absurdly far out; fall back to all pairs.
        ii, jj = np.triu_indices(m, k=1)
        return eligible[ii].astype(np.int64), eligible[jj].astype(np.int64)
    cells = fcells.astype(np.int64)

    def encode(c):
        return ((c[:, 0] + bias) << 42) | ((c[:, 1] + bias) << 21) | (c[:, 2] + bias)

    order = np.argsort(encode(cells), kind="stable")
    sorted_cells = cells[order]
    keys = encode(sorted_cells)
    pi_parts: list[np.ndarray] = []
    pj_parts: list[np.ndarray] = []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            for oz in (-1, 0, 1):
                probe = encode(sorted_cells + np.array([ox, oy, oz], dtype=np.int64))
                lo = np.searchsorted(keys, probe, side="left")
                hi = np.searchsorted(keys, probe, side="right")
                counts = hi - lo
                total = int(counts.sum())
                if total == 0:
                    continue
                src = np.repeat(np.arange(m), counts)
                offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
                tgt = np.repeat(lo, counts) + offsets
                a = eligible[order[src]]
                b = eligible[order[tgt]]
                keep = a < b
                pi_parts.append(a[keep])
                pj_parts.append(b[keep])
    if not pi_parts:
        return empty
    pi = np.concatenate(pi_parts)
    pj = np.concatenate(pj_parts)
    packed = np.unique(pi.astype(np.int64) * (np.int64(1) << 32) + pj)
    return (packed >> 32).astype(np.int64), (packed & ((np.int64(1) << 32) - 1)).astype(np.int64)


def resolve_collisions(graph: SimGraph, state: SimulationState, config: Config) -> SimulationState:
    """Positional, horizontal-only overlap correction over a static pair
    set, split inversely by mass.  Runs collision_iterations passes and
    keeps going (bounded) while any candidate pair still overlaps more
    than the 1e-6 m tolerance."""
    ga = graph.arrays()
    pi, pj = collision_pairs(state.positions, ga.radius)
    if pi.size == 0:
        return state
    pos = state.positions
    for _ in range(config.collision_iterations):
        K.collision_pass(pos, pi, pj, ga.radius, ga.mass, ga.movable, _seed64(config))
    extra = 0
    while (
        K.collision_residual(pos, pi, pj, ga.radius) > COLLISION_TOLERANCE_M
        and extra < _EXTRA_COLLISION_PASS_CAP
    ):
        K.collision_pass(pos, pi, pj, ga.radius, ga.mass, ga.movable, _seed64(config))
        extra += 1
    return state


def step(graph: SimGraph, state: SimulationState, config: Config) -> SimulationState:
    """Advance one Velocity Verlet tick in place (also returns state)."""
    ga = graph.arrays()
    dt = config.dt
    movable = ga.movable[:, None]
    pos = state.positions
    vel = state.velocities
    acc_old = state.accelerations

    pos += (vel * dt + 0.5 * acc_old * (dt * dt)) * movable
    if pos.size and not (np.abs(pos).max() <= _DIVERGENCE_BOUND_M):
        # Catches NaN too (the comparison is then False).
        state.tick += 1
        raise NonFiniteStateError(
            f"coordinates diverged at tick {state.tick}; force constants "
            "are likely too stiff for the timestep"
        )
    total = _total_forces(graph, state, config)
    acc_new = (state.alpha * total / ga.mass[:, None]) * movable
    vel[...] = (vel + 0.5 * (acc_old + acc_new) * dt) * config.velocity_decay * movable
    state.accelerations = acc_new

    if config.floor_pinning_enabled:
        apply_floor_pinning(graph, state)
    else:
        _snap_hard_anchors(ga, state)
    resolve_collisions(graph, state, config)

    state.tick += 1
    state.alpha = config.alpha0 * (1.0 - config.alpha_decay) ** state.tick
    state.converged = state.alpha < config.alpha_min or state.tick >= config.max_ticks

    if not np.isfinite(state.positions).all():
        raise NonFiniteStateError(
            f"non-finite coordinate at tick {state.tick}; force constants "
            "are likely too stiff for the timestep"
        )
    return state


def run_to_convergence(graph: SimGraph, config: Config) -> tuple[SimulationState, int]:
    """init_positions then step until converged; deterministic for fixed
    (graph, config)."""
    config.validate()
    state = init_positions(graph, config)
    while not state.converged:
        step(graph, state, config)
    return state, state.tick
