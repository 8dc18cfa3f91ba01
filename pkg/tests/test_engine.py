import numpy as np
import pytest

import metascene as ms
from metascene.errors import NonFiniteStateError
from metascene.metadata import infer_adjacency
from metascene.sim.engine import (
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
from metascene.sim.graph import SimGraph, SimLink, SimNode, build_sim_graph

CFG = ms.Config()


def make_graph(nodes, links=()):
    g = SimGraph()
    for node in nodes:
        g.index_of[node.node_id] = len(g.nodes)
        g.nodes.append(node)
    g.links = list(links)
    return g


def free_node(name, room="R", level=0, mass=1.0, charge=0.0, radius=0.0, anchor=None):
    return SimNode(name, "sensor", room, level, mass, charge, radius,
                   level * CFG.floor_height_m, anchor=anchor)


def place(graph, positions, config=CFG):
    state = init_positions(graph, config)
    state.positions[:] = np.asarray(positions, dtype=np.float64)
    state.velocities[:] = 0.0
    state.accelerations[:] = 0.0
    return state


# -- init_positions ----------------------------------------------------


def test_init_empty_graph():
    state = init_positions(make_graph([]), CFG)
    assert state.positions.shape == (0, 3)
    assert state.alpha == 1.0 and state.tick == 0 and not state.converged


def test_init_deterministic(reference_doc):
    g = build_sim_graph(reference_doc, ms.PathLossParams(), CFG)
    a = init_positions(g, CFG)
    b = init_positions(g, CFG)
    assert np.array_equal(a.positions, b.positions)
    c = init_positions(g, CFG.replace(seed=43))
    assert not np.array_equal(a.positions, c.positions)


def test_init_pins_y_to_floor_plane():
    g = make_graph([free_node("a", level=2)])
    state = init_positions(g, CFG)
    assert state.positions[0, 1] == 2 * 4.0
    assert np.hypot(state.positions[0, 0], state.positions[0, 2]) <= 30.0


def test_init_hard_anchor_exact():
    g = make_graph([free_node("a", anchor=((3.0, 1.0, -2.0), True))])
    state = init_positions(g, CFG)
    assert tuple(state.positions[0]) == (3.0, 1.0, -2.0)


# -- link forces -------------------------------------------------------


def two_node_graph(stiffness, rest):
    return make_graph(
        [free_node("a", room="RA"), free_node("b", room="RB")],
        [SimLink("l", 0, 1, rest, stiffness, "signal")],
    )


def test_spring_attracts_when_stretched():
    g = two_node_graph(stiffness=1.0, rest=1.0)
    state = place(g, [[0, 0, 0], [2, 0, 0]])
    f = accumulate_link_forces(g, state, CFG)
    assert f[0] == pytest.approx([1.0, 0.0, 0.0])
    assert f[1] == pytest.approx([-1.0, 0.0, 0.0])
    assert np.all(f[0] + f[1] == 0.0)  # Newton's third law, exact


def test_spring_zero_at_rest():
    g = two_node_graph(stiffness=1.0, rest=2.0)
    state = place(g, [[0, 0, 0], [2, 0, 0]])
    assert np.all(accumulate_link_forces(g, state, CFG) == 0.0)


def test_spring_repels_when_compressed():
    g = two_node_graph(stiffness=2.0, rest=1.0)
    state = place(g, [[0, 0, 0], [0.5, 0, 0]])
    f = accumulate_link_forces(g, state, CFG)
    assert f[0] == pytest.approx([-1.0, 0.0, 0.0])  # 2 * (0.5 - 1), toward -x
    assert f[1] == pytest.approx([1.0, 0.0, 0.0])


def test_spring_coincident_deterministic_jitter():
    g = two_node_graph(stiffness=1.0, rest=1.0)
    state = place(g, [[1, 0, 1], [1, 0, 1]])
    f1 = accumulate_link_forces(g, state, CFG)
    f2 = accumulate_link_forces(g, state, CFG)
    assert np.array_equal(f1, f2)
    assert np.linalg.norm(f1[0]) == pytest.approx(1.0)  # |stiff * (0 - rest)|
    assert np.all(f1[0] == -f1[1])


# -- charge forces -----------------------------------------------------


def test_charge_equal_pair_symmetry():
    g = make_graph([free_node("a", charge=-30.0), free_node("b", charge=-30.0)])
    state = place(g, [[0, 0, 0], [3, 0, 0]])
    f = accumulate_charge_forces(g, state, CFG, theta=0.0)
    assert f[0] == pytest.approx([-100.0, 0.0, 0.0])  # 900/9 pushing apart
    assert np.all(f[0] == -f[1])


def test_charge_rooms_inert():
    g = make_graph([free_node("a", charge=0.0), free_node("b", charge=-30.0)])
    state = place(g, [[0, 0, 0], [1, 0, 0]])
    assert np.all(accumulate_charge_forces(g, state, CFG, theta=0.5) == 0.0)


def test_charge_min_distance_clamp():
    g = make_graph([free_node("a", charge=-30.0), free_node("b", charge=-30.0)])
    state = place(g, [[0, 0, 0], [0.01, 0, 0]])
    f = accumulate_charge_forces(g, state, CFG, theta=0.0)
    # denominator clamps at r_min^2 = 0.01
    assert np.linalg.norm(f[0]) == pytest.approx(900.0 / 0.01)


# -- grouping ----------------------------------------------------------


def test_same_room_attraction_magnitude():
    g = make_graph([free_node("a", room="R1"), free_node("b", room="R1")])
    state = place(g, [[0, 0, 0], [4, 0, 0]])
    f = accumulate_grouping_forces(g, state, CFG)
    assert f[0] == pytest.approx([0.2, 0.0, 0.0])  # 0.05 * 4 toward peer
    assert f[1] == pytest.approx([-0.2, 0.0, 0.0])


def test_different_rooms_no_grouping():
    g = make_graph([free_node("a", room="R1"), free_node("b", room="R2")])
    state = place(g, [[0, 0, 0], [4, 0, 0]])
    assert np.all(accumulate_grouping_forces(g, state, CFG) == 0.0)


def test_single_device_no_grouping():
    g = make_graph([free_node("a", room="R1")])
    state = place(g, [[0, 0, 0]])
    assert np.all(accumulate_grouping_forces(g, state, CFG) == 0.0)


# -- room repulsion ----------------------------------------------------


def room_node(name, level=0):
    return SimNode(name, "room", name, level, CFG.mass_room, 0.0, 0.0,
                   level * CFG.floor_height_m)


def test_room_repulsion_magnitude():
    g = make_graph([room_node("A"), room_node("B")])
    state = place(g, [[0, 0, 0], [10, 0, 0]])
    f = accumulate_room_repulsion(g, state, CFG)
    assert f[0] == pytest.approx([-20.0, 0.0, 0.0])  # 200/10 apart
    assert f[1] == pytest.approx([20.0, 0.0, 0.0])


def test_room_repulsion_skips_other_floors():
    g = make_graph([room_node("A", level=0), room_node("B", level=1)])
    state = place(g, [[0, 0, 0], [1, 4, 0]])
    assert np.all(accumulate_room_repulsion(g, state, CFG) == 0.0)


def test_single_room_no_repulsion():
    g = make_graph([room_node("A")])
    state = place(g, [[0, 0, 0]])
    assert np.all(accumulate_room_repulsion(g, state, CFG) == 0.0)


def test_room_repulsion_horizontal_only_and_near_clamp():
    g = make_graph([room_node("A"), room_node("B")])
    state = place(g, [[0, 0, 0], [0.1, 0, 0]])
    f = accumulate_room_repulsion(g, state, CFG)
    assert abs(f[0][0]) == pytest.approx(400.0)  # 200 / max(r, 0.5)
    assert f[0][1] == 0.0


# -- floor repulsion ---------------------------------------------------


def test_floor_repulsion_disabled_by_default():
    g = make_graph([free_node("a", level=0), free_node("b", level=1)])
    state = place(g, [[0, 0, 0], [0, 4, 0]])
    assert np.all(accumulate_floor_repulsion(g, state, CFG) == 0.0)


def test_floor_repulsion_enabled_vertical():
    cfg = CFG.replace(floor_repulsion_enabled=True, floor_pinning_enabled=False)
    g = make_graph([free_node("a", level=0), free_node("b", level=1)])
    state = place(g, [[0, 0, 0], [0, 0, 0]], cfg)
    f = accumulate_floor_repulsion(g, state, cfg)
    assert f[1, 1] == pytest.approx(cfg.floor_repulsion_k / 0.5)
    assert f[0, 1] == -f[1, 1]
    assert np.all(f[:, [0, 2]] == 0.0)


def test_floor_repulsion_same_floor_zero():
    cfg = CFG.replace(floor_repulsion_enabled=True, floor_pinning_enabled=False)
    g = make_graph([free_node("a", level=1), free_node("b", level=1)])
    state = place(g, [[0, 4, 0], [1, 4, 0]], cfg)
    assert np.all(accumulate_floor_repulsion(g, state, cfg) == 0.0)


# -- step --------------------------------------------------------------


def test_step_zero_forces_positions_unchanged():
    g = make_graph([free_node("a"), free_node("b", room="R2")])
    state = place(g, [[0, 0, 0], [5, 0, 0]])
    before = state.positions.copy()
    step(g, state, CFG)
    assert np.array_equal(state.positions, before)
    assert state.alpha == pytest.approx(1.0 * (1 - CFG.alpha_decay))
    assert state.tick == 1


def test_step_advances_by_velocity():
    cfg = CFG.replace(velocity_decay=1.0)
    g = make_graph([free_node("a")])
    state = place(g, [[0, 0, 0]], cfg)
    state.velocities[0] = (1.0, 0.0, 0.0)
    step(g, state, cfg)
    assert state.positions[0] == pytest.approx([1.0, 0.0, 0.0])
    assert state.velocities[0] == pytest.approx([1.0, 0.0, 0.0])


def test_oscillator_energy_drift():
    """Undamped harmonic oscillator: bob on a unit spring to a hard
    anchor.  Velocity Verlet should hold energy to < 0.1% over 1e4
    steps at dt = 0.01 (symplectic)."""
    cfg = ms.Config(dt=0.01, velocity_decay=1.0, alpha_decay=0.0, max_ticks=10**9)
    g = make_graph(
        [free_node("anchor", room="RA", anchor=((0.0, 0.0, 0.0), True)),
         free_node("bob", room="RB")],
        [SimLink("s", 1, 0, 1.0, 1.0, "signal")],
    )
    state = place(g, [[0, 0, 0], [1.5, 0, 0]], cfg)

    def energy(s):
        x = s.positions[1, 0] - 1.0
        v = s.velocities[1, 0]
        return 0.5 * v * v + 0.5 * x * x

    e0 = energy(state)
    worst = 0.0
    for _ in range(10_000):
        step(g, state, cfg)
        worst = max(worst, abs(energy(state) - e0) / e0)
    assert worst < 1e-3


def test_oscillator_tracks_analytic_trajectory():
    # x(t) = 1 + 0.5 cos(t) for unit mass/stiffness about rest 1.0
    cfg = ms.Config(dt=0.01, velocity_decay=1.0, alpha_decay=0.0, max_ticks=10**9)
    g = make_graph(
        [free_node("anchor", room="RA", anchor=((0.0, 0.0, 0.0), True)),
         free_node("bob", room="RB")],
        [SimLink("s", 1, 0, 1.0, 1.0, "signal")],
    )
    state = place(g, [[0, 0, 0], [1.5, 0, 0]], cfg)
    for _ in range(1000):  # t = 10
        step(g, state, cfg)
    expected = 1.0 + 0.5 * np.cos(10.0)
    assert state.positions[1, 0] == pytest.approx(expected, abs=2e-3)


def test_spring_system_converges_to_rest_length():
    g = make_graph(
        [free_node("a", room="RA"), free_node("b", room="RB")],
        [SimLink("l", 0, 1, 1.0, 0.7, "signal")],
    )
    state, ticks = run_to_convergence(g, CFG)
    dist = np.linalg.norm(state.positions[1] - state.positions[0])
    assert abs(dist - 1.0) <= 0.01
    assert ticks == 300


def test_non_finite_detection():
    cfg = CFG.replace(dt=1000.0)  # absurd timestep blows up the spring
    g = make_graph(
        [free_node("a", room="RA", charge=-30.0), free_node("b", room="RB", charge=-30.0)],
        [SimLink("l", 0, 1, 1.0, 0.7, "signal")],
    )
    state = place(g, [[0, 0, 0], [0.001, 0, 0]], cfg)
    with pytest.raises(NonFiniteStateError):
        for _ in range(200):
            step(g, state, cfg)


# -- pinning -----------------------------------------------------------


def test_pinning_restores_plane():
    g = make_graph([free_node("a", level=2)])
    state = place(g, [[1.0, 8.3, 0.0]])
    state.velocities[0, 1] = 2.0
    apply_floor_pinning(g, state)
    assert state.positions[0, 1] == 8.0
    assert state.velocities[0, 1] == 0.0


def test_pinning_noop_when_on_plane():
    g = make_graph([free_node("a", level=1)])
    state = place(g, [[1.0, 4.0, 2.0]])
    before = state.positions.copy()
    apply_floor_pinning(g, state)
    assert np.array_equal(state.positions, before)


def test_pinning_snaps_hard_anchor():
    g = make_graph([free_node("a", anchor=((1.0, 2.0, 3.0), True))])
    state = place(g, [[9.0, 9.0, 9.0]])
    apply_floor_pinning(g, state)
    assert tuple(state.positions[0]) == (1.0, 2.0, 3.0)


def test_pinning_exact_after_every_tick(reference_doc):
    g = build_sim_graph(reference_doc, ms.PathLossParams(), CFG,
                        adjacency=infer_adjacency(reference_doc))
    state = init_positions(g, CFG)
    planes = g.arrays().pinned_y
    for _ in range(25):
        step(g, state, CFG)
        assert np.array_equal(state.positions[:, 1], planes)


# -- collisions --------------------------------------------------------


def test_collision_splits_overlap_evenly():
    g = make_graph([
        free_node("a", room="RA", radius=0.25),
        free_node("b", room="RB", radius=0.25),
    ])
    state = place(g, [[0, 0, 0], [0.3, 0, 0]])
    resolve_collisions(g, state, CFG)
    assert state.positions[0] == pytest.approx([-0.1, 0, 0])
    assert state.positions[1] == pytest.approx([0.4, 0, 0])
    d = np.linalg.norm(state.positions[1] - state.positions[0])
    assert d >= 0.5 - 1e-9


def test_collision_mass_weighted_split():
    g = make_graph([
        free_node("a", room="RA", radius=0.25, mass=3.0),
        free_node("b", room="RB", radius=0.25, mass=1.0),
    ])
    state = place(g, [[0, 0, 0], [0.3, 0, 0]])
    resolve_collisions(g, state, CFG)
    # lighter node moves 3x farther
    assert state.positions[0, 0] == pytest.approx(-0.05)
    assert state.positions[1, 0] == pytest.approx(0.45)


def test_collision_ignores_non_overlapping():
    g = make_graph([
        free_node("a", room="RA", radius=0.25),
        free_node("b", room="RB", radius=0.25),
    ])
    state = place(g, [[0, 0, 0], [1.0, 0, 0]])
    before = state.positions.copy()
    resolve_collisions(g, state, CFG)
    assert np.array_equal(state.positions, before)


def test_room_nodes_are_phantom():
    g = make_graph([
        room_node("A"),
        free_node("s", room="A", radius=0.25),
    ])
    state = place(g, [[0, 0, 0], [0, 0, 0]])
    before = state.positions.copy()
    resolve_collisions(g, state, CFG)
    assert np.array_equal(state.positions, before)


def test_collision_chain_resolves_within_tolerance():
    nodes = [free_node(f"n{i}", room=f"R{i}", radius=0.25) for i in range(8)]
    g = make_graph(nodes)
    state = place(g, [[0.05 * i, 0.0, 0.0] for i in range(8)])
    resolve_collisions(g, state, CFG)
    pos = state.positions
    for i in range(8):
        for j in range(i + 1, 8):
            assert np.linalg.norm(pos[i] - pos[j]) >= 0.5 - 1e-6


# -- determinism and alpha schedule -------------------------------------


def test_alpha_schedule_closed_form(reference_doc):
    g = build_sim_graph(reference_doc, ms.PathLossParams(), CFG)
    state = init_positions(g, CFG)
    for _ in range(10):
        step(g, state, CFG)
        assert state.alpha == CFG.alpha0 * (1.0 - CFG.alpha_decay) ** state.tick


def test_convergence_tick_matches_closed_form():
    # ceil(ln(alpha_min) / ln(1 - decay)) = 300 with the defaults
    expected = int(np.ceil(np.log(CFG.alpha_min) / np.log(1.0 - CFG.alpha_decay)))
    assert expected == 300
    g = make_graph([free_node("a")])
    state, ticks = run_to_convergence(g, CFG)
    assert ticks == expected
    assert state.converged


def test_empty_graph_converges():
    state, ticks = run_to_convergence(make_graph([]), CFG)
    assert state.converged and ticks == 300
    assert state.positions.shape == (0, 3)


def test_trajectories_bit_identical(reference_doc):
    g = build_sim_graph(reference_doc, ms.PathLossParams(), CFG,
                        adjacency=infer_adjacency(reference_doc))
    a, _ = run_to_convergence(g, CFG)
    b, _ = run_to_convergence(g, CFG)
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.velocities, b.velocities)
