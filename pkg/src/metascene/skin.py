"""Skinning: turn a converged particle cloud into building geometry.

Rooms become padded axis-aligned boxes around their member devices,
floors become thin slabs spanning the envelope footprint, and the
envelope is the padded union of all room boxes.
"""

from __future__ import annotations

import numpy as np

from .config import Config
from .errors import EmptyBuildingError, EmptyRoomError
from .geometry import Aabb, FloorSlab, RoomBox
from .metadata.types import MetadataDocument, RoomRecord
from .scene.colors import STRUCTURAL_GRAY, ColorRamp, color_for_rssi
from .scene.document import LinkEntry, NodeEntry, SceneDocument, scene_version_hash
from .sim.engine import SimulationState
from .sim.graph import SimGraph


def room_aabb(member_positions, room: RoomRecord, config: Config = Config()) -> Aabb:
    """Box around a room's device positions.

    Cartesian extremes, padded by max(pad_min, pad_frac * extent) per
    side.  A degenerate cloud (all extents zero, e.g. one device) grows
    to a minimum cube first.  A surveyed known_size overrides the
    inferred size exactly, centered on the position centroid.
    """
    pts = np.asarray(member_positions, dtype=np.float64).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise EmptyRoomError(f"room {room.room_id!r} has no device positions")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    centroid = pts.mean(axis=0)

    if room.known_size is not None:
        half = np.array(room.known_size, dtype=np.float64) * 0.5
        return Aabb(min=tuple(centroid - half), max=tuple(centroid + half))

    extents = hi - lo
    if np.all(extents <= 0.0):
        half = config.min_room_extent_m * 0.5
        lo = centroid - half
        hi = centroid + half
        extents = hi - lo
    pad = np.maximum(config.room_padding_min_m, config.room_padding_frac * extents)
    return Aabb(min=tuple(lo - pad), max=tuple(hi + pad))


def building_aabb(room_boxes: list[RoomBox], config: Config = Config()) -> Aabb:
    """Envelope: union of all room boxes plus envelope padding."""
    if not room_boxes:
        raise EmptyBuildingError("cannot compute an envelope with no room boxes")
    box = room_boxes[0].box
    for rb in room_boxes[1:]:
        box = box.union(rb.box)
    return box.expanded(config.envelope_padding_m)


def floor_slabs(floors, envelope: Aabb, config: Config = Config()) -> list[FloorSlab]:
    """One thin slab per floor at y = level_index * floor_height, spanning
    the envelope footprint."""
    slabs = []
    half_t = config.slab_thickness_m * 0.5
    for floor in sorted(floors, key=lambda f: f.level_index):
        plane_y = floor.level_index * config.floor_height_m
        extent = Aabb(
            min=(envelope.min[0], plane_y - half_t, envelope.min[2]),
            max=(envelope.max[0], plane_y + half_t, envelope.max[2]),
        )
        slabs.append(FloorSlab(level_index=floor.level_index, plane_y=plane_y, extent=extent))
    return slabs


def build_scene(
    graph: SimGraph,
    state: SimulationState,
    doc: MetadataDocument,
    config: Config = Config(),
    ramp: ColorRamp = ColorRamp(),
) -> SceneDocument:
    """Assemble the full scene: node positions, colored links, room boxes,
    slabs and envelope.  Empty rooms are skipped with a warning; the
    scene version is a content hash of (document, config) so identical
    inputs always produce identical versions."""
    warnings: list[str] = []
    positions = state.positions

    nodes = []
    for i, nd in enumerate(graph.nodes):
        nodes.append(NodeEntry(
            node_id=nd.node_id,
            kind=nd.kind,
            room_id=nd.room_id,
            level_index=nd.level_index,
            position=(float(positions[i, 0]), float(positions[i, 1]), float(positions[i, 2])),
        ))

    links = []
    for lk in graph.links:
        color = STRUCTURAL_GRAY if lk.rssi_dbm is None else color_for_rssi(lk.rssi_dbm, ramp)
        links.append(LinkEntry(
            link_id=lk.link_id,
            from_id=graph.nodes[lk.from_idx].node_id,
            to_id=graph.nodes[lk.to_idx].node_id,
            rssi_dbm=lk.rssi_dbm,
            color_rgb=color,
            kind=lk.kind,
        ))

    members: dict[str, list[int]] = {}
    for i, nd in enumerate(graph.nodes):
        if nd.kind != "room":
            members.setdefault(nd.room_id, []).append(i)

    floor_level = {f.floor_id: f.level_index for f in doc.floors}
    room_boxes: list[RoomBox] = []
    for room in doc.rooms:
        idxs = members.get(room.room_id)
        if not idxs:
            warnings.append(f"room {room.room_id!r} has no devices; skipped from skinning")
            continue
        box = room_aabb(positions[idxs], room, config)
        room_boxes.append(RoomBox(
            room_id=room.room_id,
            box=box,
            label=room.label,
            level_index=floor_level[room.floor_id],
        ))

    envelope = None
    slabs: list[FloorSlab] = []
    if room_boxes:
        envelope = building_aabb(room_boxes, config)
        slabs = floor_slabs(doc.floors, envelope, config)
    elif doc.floors:
        warnings.append("no room boxes; floor slabs and envelope omitted")

    return SceneDocument(
        scene_version=scene_version_hash(doc, config),
        building_id=doc.building_id,
        nodes=nodes,
        links=links,
        rooms=room_boxes,
        floors=slabs,
        envelope=envelope,
        warnings=warnings,
    )
