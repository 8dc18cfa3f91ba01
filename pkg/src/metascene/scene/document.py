"""The scene document: the engine-to-viewer contract.

Serialization is canonical: fixed key order, compact separators,
shortest round-trip float rendering.  Equal scenes therefore serialize
to identical bytes, and the scene version is a content hash of the
inputs (metadata document + config, which includes the seed).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from ..errors import SceneFormatError
from ..geometry import Aabb, FloorSlab, RoomBox

NODE_KINDS = ("room", "sensor", "gateway")
LINK_KINDS = ("signal", "sensor_room", "gateway_room", "adjacency")


@dataclass(frozen=True)
class NodeEntry:
    node_id: str
    kind: str
    room_id: str
    level_index: int
    position: tuple[float, float, float]


@dataclass(frozen=True)
class LinkEntry:
    link_id: str
    from_id: str
    to_id: str
    rssi_dbm: Optional[float]
    color_rgb: tuple[int, int, int]
    kind: str


@dataclass(frozen=True)
class SceneDocument:
    scene_version: str
    building_id: str
    nodes: list[NodeEntry] = field(default_factory=list)
    links: list[LinkEntry] = field(default_factory=list)
    rooms: list[RoomBox] = field(default_factory=list)
    floors: list[FloorSlab] = field(default_factory=list)
    envelope: Optional[Aabb] = None
    warnings: list[str] = field(default_factory=list)


def scene_version_hash(doc, config) -> str:
    """Content hash of the pipeline inputs (document, config incl. seed)."""
    from ..metadata.parse import serialize_document

    h = hashlib.sha256()
    h.update(serialize_document(doc))
    h.update(b"\n")
    h.update(json.dumps(config.to_json_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8"))
    return h.hexdigest()[:16]


def _aabb_dict(box: Aabb) -> dict:
    return {"min": list(box.min), "max": list(box.max)}


def scene_to_dict(scene: SceneDocument) -> dict:
    return {
        "scene_version": scene.scene_version,
        "building_id": scene.building_id,
        "nodes": [
            {
                "node_id": n.node_id,
                "kind": n.kind,
                "room_id": n.room_id,
                "level_index": n.level_index,
                "position": list(n.position),
            }
            for n in scene.nodes
        ],
        "links": [
            {
                "link_id": lk.link_id,
                "from": lk.from_id,
                "to": lk.to_id,
                "rssi_dbm": lk.rssi_dbm,
                "color_rgb": list(lk.color_rgb),
                "kind": lk.kind,
            }
            for lk in scene.links
        ],
        "rooms": [
            {
                "room_id": rb.room_id,
                "box": _aabb_dict(rb.box),
                "label": rb.label,
                "level_index": rb.level_index,
            }
            for rb in scene.rooms
        ],
        "floors": [
            {
                "level_index": fs.level_index,
                "plane_y": fs.plane_y,
                "extent": _aabb_dict(fs.extent),
            }
            for fs in scene.floors
        ],
        "envelope": _aabb_dict(scene.envelope) if scene.envelope is not None else None,
        "warnings": list(scene.warnings),
    }


def to_scene_json(scene: SceneDocument) -> bytes:
    """Canonical scene bytes; parse_scene_json inverts this exactly."""
    return json.dumps(scene_to_dict(scene), separators=(",", ":"), allow_nan=False).encode("utf-8")


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise SceneFormatError(msg)


def _vec3(value, where: str) -> tuple[float, float, float]:
    _expect(isinstance(value, list) and len(value) == 3, f"{where}: expected [x, y, z]")
    out = []
    for v in value:
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool), f"{where}: expected numbers")
        _expect(math.isfinite(v), f"{where}: must be finite")
        out.append(float(v))
    return tuple(out)  # type: ignore[return-value]


def _aabb(value, where: str) -> Aabb:
    _expect(isinstance(value, dict) and set(value) == {"min", "max"}, f"{where}: expected an AABB")
    return Aabb(min=_vec3(value["min"], f"{where}.min"), max=_vec3(value["max"], f"{where}.max"))


def _color(value, where: str) -> tuple[int, int, int]:
    _expect(isinstance(value, list) and len(value) == 3, f"{where}: expected [r, g, b]")
    for v in value:
        _expect(isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= 255,
                f"{where}: components must be integers in [0, 255]")
    return tuple(value)  # type: ignore[return-value]


def parse_scene_json(data: bytes | str) -> SceneDocument:
    """Parse and validate a scene document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneFormatError(f"scene is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"scene is not valid JSON: {exc}") from exc
    _expect(isinstance(raw, dict), "scene root must be an object")
    required = {"scene_version", "building_id", "nodes", "links", "rooms", "floors", "envelope", "warnings"}
    _expect(set(raw) == required, f"scene keys must be exactly {sorted(required)}")
    _expect(isinstance(raw["scene_version"], str) and raw["scene_version"], "scene_version must be a string")
    _expect(isinstance(raw["building_id"], str) and raw["building_id"], "building_id must be a string")

    nodes = []
    node_ids = set()
    _expect(isinstance(raw["nodes"], list), "nodes must be an array")
    for i, entry in enumerate(raw["nodes"]):
        where = f"nodes[{i}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        _expect(set(entry) == {"node_id", "kind", "room_id", "level_index", "position"},
                f"{where}: unexpected keys")
        _expect(entry["kind"] in NODE_KINDS, f"{where}: bad kind")
        _expect(isinstance(entry["level_index"], int), f"{where}: level_index must be an integer")
        node = NodeEntry(
            node_id=entry["node_id"],
            kind=entry["kind"],
            room_id=entry["room_id"],
            level_index=entry["level_index"],
            position=_vec3(entry["position"], f"{where}.position"),
        )
        node_ids.add(node.node_id)
        nodes.append(node)

    links = []
    _expect(isinstance(raw["links"], list), "links must be an array")
    for i, entry in enumerate(raw["links"]):
        where = f"links[{i}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        _expect(set(entry) == {"link_id", "from", "to", "rssi_dbm", "color_rgb", "kind"},
                f"{where}: unexpected keys")
        _expect(entry["kind"] in LINK_KINDS, f"{where}: bad kind")
        rssi = entry["rssi_dbm"]
        if rssi is not None:
            _expect(isinstance(rssi, (int, float)) and not isinstance(rssi, bool)
                    and math.isfinite(rssi), f"{where}: rssi_dbm must be a number or null")
            rssi = float(rssi)
        for endpoint in (entry["from"], entry["to"]):
            _expect(endpoint in node_ids, f"{where}: endpoint {endpoint!r} not in nodes")
        links.append(LinkEntry(
            link_id=entry["link_id"],
            from_id=entry["from"],
            to_id=entry["to"],
            rssi_dbm=rssi,
            color_rgb=_color(entry["color_rgb"], f"{where}.color_rgb"),
            kind=entry["kind"],
        ))

    rooms = []
    _expect(isinstance(raw["rooms"], list), "rooms must be an array")
    for i, entry in enumerate(raw["rooms"]):
        where = f"rooms[{i}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        _expect(set(entry) == {"room_id", "box", "label", "level_index"}, f"{where}: unexpected keys")
        _expect(isinstance(entry["level_index"], int), f"{where}: level_index must be an integer")
        rooms.append(RoomBox(
            room_id=entry["room_id"],
            box=_aabb(entry["box"], f"{where}.box"),
            label=entry["label"],
            level_index=entry["level_index"],
        ))

    floors = []
    _expect(isinstance(raw["floors"], list), "floors must be an array")
    for i, entry in enumerate(raw["floors"]):
        where = f"floors[{i}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        _expect(set(entry) == {"level_index", "plane_y", "extent"}, f"{where}: unexpected keys")
        _expect(isinstance(entry["level_index"], int), f"{where}: level_index must be an integer")
        _expect(isinstance(entry["plane_y"], (int, float)) and not isinstance(entry["plane_y"], bool),
                f"{where}: plane_y must be a number")
        floors.append(FloorSlab(
            level_index=entry["level_index"],
            plane_y=float(entry["plane_y"]),
            extent=_aabb(entry["extent"], f"{where}.extent"),
        ))

    envelope = None
    if raw["envelope"] is not None:
        envelope = _aabb(raw["envelope"], "envelope")

    warnings = raw["warnings"]
    _expect(isinstance(warnings, list) and all(isinstance(w, str) for w in warnings),
            "warnings must be an array of strings")

    return SceneDocument(
        scene_version=raw["scene_version"],
        building_id=raw["building_id"],
        nodes=nodes,
        links=links,
        rooms=rooms,
        floors=floors,
        envelope=envelope,
        warnings=list(warnings),
    )
