"""Particle-simulation model: typed nodes, spring links, and translation
from a metadata document into a simulation graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..config import Config
from ..errors import SchemaError
from ..metadata.pathloss import PathLossParams, corrected_rssi, rssi_to_distance
from ..metadata.types import AdjacencyHint, MetadataDocument

NODE_KINDS = ("room", "sensor", "gateway")
LINK_KINDS = ("signal", "sensor_room", "gateway_room", "adjacency")


@dataclass(frozen=True)
class SimNode:
    node_id: str
    kind: str                 # room | sensor | gateway
    room_id: str              # self for room nodes
    level_index: int
    mass: float
    charge: float
    radius: float
    pinned_y: float
    anchor: Optional[tuple[tuple[float, float, float], bool]] = None  # (position, hard)


@dataclass(frozen=True)
class SimLink:
    link_id: str
    from_idx: int
    to_idx: int
    rest_length: float
    stiffness: float
    kind: str                 # signal | sensor_room | gateway_room | adjacency
    rssi_dbm: Optional[float] = None


@dataclass
class SimGraph:
    nodes: list[SimNode] = field(default_factory=list)
    links: list[SimLink] = field(default_factory=list)
    index_of: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self._arrays: Optional[GraphArrays] = None

    def node_count(self) -> int:
        return len(self.nodes)

    def link_count(self) -> int:
        return len(self.links)

    def arrays(self) -> "GraphArrays":
        """Flat numpy views of the graph, built once and cached."""
        if self._arrays is None:
            self._arrays = GraphArrays.from_graph(self)
        return self._arrays


@dataclass(frozen=True)
class GraphArrays:
    """Static per-graph arrays consumed by the force kernels."""

    level: np.ndarray          # (n,) int64
    pinned_y: np.ndarray       # (n,) f64
    mass: np.ndarray           # (n,) f64
    charge: np.ndarray         # (n,) f64
    radius: np.ndarray         # (n,) f64
    movable: np.ndarray        # (n,) bool; False for hard anchors
    is_room: np.ndarray        # (n,) bool
    charged_idx: np.ndarray    # indices with nonzero charge
    link_from: np.ndarray      # (L,) int64
    link_to: np.ndarray        # (L,) int64
    link_rest: np.ndarray      # (L,) f64
    link_stiff: np.ndarray     # (L,) f64
    group_i: np.ndarray        # same-room device pairs, i < j
    group_j: np.ndarray
    roompair_i: np.ndarray     # same-floor room-node pairs, i < j
    roompair_j: np.ndarray
    anchor_idx: np.ndarray     # soft-anchor node indices
    anchor_pos: np.ndarray     # (k, 3) f64
    hard_idx: np.ndarray       # hard-anchor node indices
    hard_pos: np.ndarray       # (k, 3) f64

    @staticmethod
    def from_graph(graph: "SimGraph") -> "GraphArrays":
        n = len(graph.nodes)
        level = np.array([nd.level_index for nd in graph.nodes], dtype=np.int64)
        pinned_y = np.array([nd.pinned_y for nd in graph.nodes], dtype=np.float64)
        mass = np.array([nd.mass for nd in graph.nodes], dtype=np.float64)
        charge = np.array([nd.charge for nd in graph.nodes], dtype=np.float64)
        radius = np.array([nd.radius for nd in graph.nodes], dtype=np.float64)
        is_room = np.array([nd.kind == "room" for nd in graph.nodes], dtype=bool)
        movable = np.ones(n, dtype=bool)
        soft_i, soft_p, hard_i, hard_p = [], [], [], []
        for i, nd in enumerate(graph.nodes):
            if nd.anchor is None:
                continue
            pos, hard = nd.anchor
            if hard:
                movable[i] = False
                hard_i.append(i)
                hard_p.append(pos)
            else:
                soft_i.append(i)
                soft_p.append(pos)

        link_from = np.array([lk.from_idx for lk in graph.links], dtype=np.int64)
        link_to = np.array([lk.to_idx for lk in graph.links], dtype=np.int64)
        link_rest = np.array([lk.rest_length for lk in graph.links], dtype=np.float64)
        link_stiff = np.array([lk.stiffness for lk in graph.links], dtype=np.float64)

        by_room: dict[str, list[int]] = {}
        for i, nd in enumerate(graph.nodes):
            if nd.kind != "room":
                by_room.setdefault(nd.room_id, []).append(i)
        gi, gj = [], []
        for room_id in sorted(by_room):
            members = by_room[room_id]
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    gi.append(members[a])
                    gj.append(members[b])

        by_floor: dict[int, list[int]] = {}
        for i, nd in enumerate(graph.nodes):
            if nd.kind == "room":
                by_floor.setdefault(nd.level_index, []).append(i)
        ri, rj = [], []
        for lvl in sorted(by_floor):
            members = by_floor[lvl]
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    ri.append(members[a])
                    rj.append(members[b])

        return GraphArrays(
            level=level,
            pinned_y=pinned_y,
            mass=mass,
            charge=charge,
            radius=radius,
            movable=movable,
            is_room=is_room,
            charged_idx=np.nonzero(charge != 0.0)[0].astype(np.int64),
            link_from=link_from,
            link_to=link_to,
            link_rest=link_rest,
            link_stiff=link_stiff,
            group_i=np.array(gi, dtype=np.int64),
            group_j=np.array(gj, dtype=np.int64),
            roompair_i=np.array(ri, dtype=np.int64),
            roompair_j=np.array(rj, dtype=np.int64),
            anchor_idx=np.array(soft_i, dtype=np.int64),
            anchor_pos=np.array(soft_p, dtype=np.float64).reshape(len(soft_i), 3),
            hard_idx=np.array(hard_i, dtype=np.int64),
            hard_pos=np.array(hard_p, dtype=np.float64).reshape(len(hard_i), 3),
        )


def build_sim_graph(
    doc: MetadataDocument,
    params: PathLossParams = PathLossParams(),
    config: Config = Config(),
    adjacency: Optional[Sequence[AdjacencyHint]] = None,
) -> SimGraph:
    """Translate a metadata document into the particle model.

    One node per room, sensor and gateway; one signal link per metadata
    link with rest length from the material-corrected RSSI; one
    structural link per device to its room node.  Passing adjacency
    hints (normally from infer_adjacency) appends room-to-room springs.
    """
    graph = SimGraph()
    floor_level = {f.floor_id: f.level_index for f in doc.floors}

    def add_node(node: SimNode) -> int:
        idx = len(graph.nodes)
        if node.node_id in graph.index_of:
            raise SchemaError(f"duplicate node id {node.node_id!r} in graph")
        graph.index_of[node.node_id] = idx
        graph.nodes.append(node)
        return idx

    anchors = {a.node_id: a for a in doc.anchors}

    def anchor_for(node_id: str):
        a = anchors.get(node_id)
        if a is None:
            return None
        return (a.position_m, a.hard)

    for room in doc.rooms:
        level = floor_level[room.floor_id]
        add_node(SimNode(
            node_id=room.room_id,
            kind="room",
            room_id=room.room_id,
            level_index=level,
            mass=config.mass_room,
            charge=config.charge_room,
            radius=0.0,
            pinned_y=level * config.floor_height_m,
            anchor=anchor_for(room.room_id),
        ))

    room_level = {room.room_id: floor_level[room.floor_id] for room in doc.rooms}
    for dev in doc.devices:
        level = room_level[dev.room_id]
        radius = config.sensor_radius_m if dev.kind == "sensor" else config.gateway_radius_m
        add_node(SimNode(
            node_id=dev.device_id,
            kind=dev.kind,
            room_id=dev.room_id,
            level_index=level,
            mass=config.mass_device,
            charge=config.charge_device,
            radius=radius,
            pinned_y=level * config.floor_height_m,
            anchor=anchor_for(dev.device_id),
        ))

    for link in doc.links:
        rest = rssi_to_distance(corrected_rssi(link, doc.materials), params)
        graph.links.append(SimLink(
            link_id=f"{link.sensor_id}--{link.gateway_id}",
            from_idx=graph.index_of[link.sensor_id],
            to_idx=graph.index_of[link.gateway_id],
            rest_length=rest,
            stiffness=config.link_stiffness_signal,
            kind="signal",
            rssi_dbm=link.rssi_dbm,
        ))

    for dev in doc.devices:
        kind = "sensor_room" if dev.kind == "sensor" else "gateway_room"
        graph.links.append(SimLink(
            link_id=f"{dev.device_id}--{dev.room_id}",
            from_idx=graph.index_of[dev.device_id],
            to_idx=graph.index_of[dev.room_id],
            rest_length=config.structural_rest_length_m,
            stiffness=config.link_stiffness_structural,
            kind=kind,
        ))

    if adjacency:
        for hint in adjacency:
            graph.links.append(SimLink(
                link_id=f"{hint.room_a}--{hint.room_b}",
                from_idx=graph.index_of[hint.room_a],
                to_idx=graph.index_of[hint.room_b],
                rest_length=config.adjacency_rest_length_m,
                stiffness=config.adjacency_stiffness_scale * hint.weight,
                kind="adjacency",
            ))

    _normalize_hub_stiffness(graph)
    return graph


def _normalize_hub_stiffness(graph: SimGraph) -> None:
    """Divide each link's stiffness by its busier endpoint's degree.

    A hub node's total incident stiffness is then bounded by the largest
    nominal constant, which keeps the Velocity Verlet update stable at
    dt = 1 (total stiffness on a unit mass must stay under 4/dt^2).
    Gateways with dozens of sensor links blow up without this.
    """
    degree = [0] * len(graph.nodes)
    for lk in graph.links:
        degree[lk.from_idx] += 1
        degree[lk.to_idx] += 1
    for i, lk in enumerate(graph.links):
        d = max(degree[lk.from_idx], degree[lk.to_idx], 1)
        if d > 1:
            graph.links[i] = SimLink(
                link_id=lk.link_id,
                from_idx=lk.from_idx,
                to_idx=lk.to_idx,
                rest_length=lk.rest_length,
                stiffness=lk.stiffness / d,
                kind=lk.kind,
                rssi_dbm=lk.rssi_dbm,
            )
