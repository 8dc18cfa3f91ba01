"""Particle simulation: graph model, force kernels, Velocity Verlet engine."""

from .engine import (
    SimulationState,
    accumulate_charge_forces,
    accumulate_floor_repulsion,
    accumulate_grouping_forces,
    accumulate_link_forces,
    accumulate_room_repulsion,
    apply_floor_pinning,
    init_positions,
    resolve_collisions,
    run_to_convergence,
    step,
)
from .graph import SimGraph, SimLink, SimNode, build_sim_graph
from .kernels import backend_name
from .octree import OctreeArrays, build_octree

__all__ = [
    "OctreeArrays",
    "SimGraph",
    "SimLink",
    "SimNode",
    "SimulationState",
    "accumulate_charge_forces",
    "accumulate_floor_repulsion",
    "accumulate_grouping_forces",
    "accumulate_link_forces",
    "accumulate_room_repulsion",
    "apply_floor_pinning",
    "backend_name",
    "build_octree",
    "build_sim_graph",
    "init_positions",
    "resolve_collisions",
    "run_to_convergence",
    "step",
]
