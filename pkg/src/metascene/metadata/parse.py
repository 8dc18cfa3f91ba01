"""Parse, validate and canonically serialize metadata documents.

The on-disk format is UTF-8 JSON.  The normative schema ships at
``metascene/schemas/metadata.schema.json``; this module enforces the
same contract with precise error types, plus the referential invariants
a JSON schema cannot express (dangling ids, duplicate pairs, endpoint
kinds).
"""

from __future__ import annotations

import json
import math

from ..errors import (
    DanglingReferenceError,
    DuplicateIdError,
    MetadataSyntaxError,
    SchemaError,
)
from .types import (
    AdjacencyHint,
    AnchorHint,
    DeviceRecord,
    FloorRecord,
    LinkRecord,
    MaterialTable,
    MetadataDocument,
    RoomRecord,
)

TOP_LEVEL_KEYS = (
    "schema_version",
    "building_id",
    "floors",
    "rooms",
    "devices",
    "links",
    "materials",
    "adjacency_hints",
    "anchors",
)
_REQUIRED_KEYS = ("schema_version", "building_id", "floors", "rooms", "devices")

DEVICE_KINDS = ("sensor", "gateway")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return obj[key]


def _string(value, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{where}: expected a non-empty string")
    return value


def _finite(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{where}: must be finite")
    return value


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer")
    return value


def _obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{where}: expected an object")
    return value


def _list(value, where: str) -> list:
    if value is None:
        return []
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array or null")
    return value


def _only_keys(obj: dict, allowed: tuple[str, ...], where: str) -> None:
    extra = set(obj) - set(allowed)
    if extra:
        raise SchemaError(f"{where}: unknown key(s) {sorted(extra)!r}")


def _vec3(value, where: str) -> tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(f"{where}: expected an array of 3 numbers")
    return tuple(_finite(v, where) for v in value)  # type: ignore[return-value]


def parse_document(data: bytes | str) -> MetadataDocument:
    """Parse raw document text into a fully validated MetadataDocument."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MetadataSyntaxError(f"document is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MetadataSyntaxError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("document root must be a JSON object")
    _only_keys(raw, TOP_LEVEL_KEYS, "document")
    for key in _REQUIRED_KEYS:
        _require(raw, key, "document")

    schema_version = _string(raw["schema_version"], "schema_version")
    building_id = _string(raw["building_id"], "building_id")

    floors = []
    seen_floor_ids: set[str] = set()
    seen_levels: set[int] = set()
    for i, entry in enumerate(_list(raw["floors"], "floors")):
        where = f"floors[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("floor_id", "level_index"), where)
        fid = _string(_require(entry, "floor_id", where), f"{where}.floor_id")
        level = _integer(_require(entry, "level_index", where), f"{where}.level_index")
        if fid in seen_floor_ids:
            raise DuplicateIdError(f"duplicate floor_id {fid!r}")
        if level in seen_levels:
            raise DuplicateIdError(f"duplicate level_index {level} (floor {fid!r})")
        seen_floor_ids.add(fid)
        seen_levels.add(level)
        floors.append(FloorRecord(floor_id=fid, level_index=level))

    rooms = []
    seen_room_ids: set[str] = set()
    for i, entry in enumerate(_list(raw["rooms"], "rooms")):
        where = f"rooms[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("room_id", "floor_id", "label", "known_size"), where)
        rid = _string(_require(entry, "room_id", where), f"{where}.room_id")
        fid = _string(_require(entry, "floor_id", where), f"{where}.floor_id")
        label = _string(_require(entry, "label", where), f"{where}.label")
        if rid in seen_room_ids:
            raise DuplicateIdError(f"duplicate room_id {rid!r}")
        seen_room_ids.add(rid)
        if fid not in seen_floor_ids:
            raise DanglingReferenceError(f"room {rid!r} references unknown floor {fid!r}")
        known_size = None
        if entry.get("known_size") is not None:
            known_size = _vec3(entry["known_size"], f"{where}.known_size")
            if any(extent <= 0 for extent in known_size):
                raise SchemaError(f"{where}.known_size: extents must be > 0")
        rooms.append(RoomRecord(room_id=rid, floor_id=fid, label=label, known_size=known_size))

    devices = []
    seen_device_ids: set[str] = set()
    device_kind: dict[str, str] = {}
    for i, entry in enumerate(_list(raw["devices"], "devices")):
        where = f"devices[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("device_id", "kind", "room_id"), where)
        did = _string(_require(entry, "device_id", where), f"{where}.device_id")
        kind = _string(_require(entry, "kind", where), f"{where}.kind")
        rid = _string(_require(entry, "room_id", where), f"{where}.room_id")
        if kind not in DEVICE_KINDS:
            raise SchemaError(f"{where}.kind: unknown device kind {kind!r}")
        if did in seen_device_ids:
            raise DuplicateIdError(f"duplicate device_id {did!r}")
        seen_device_ids.add(did)
        if rid not in seen_room_ids:
            raise DanglingReferenceError(f"device {did!r} references unknown room {rid!r}")
        device_kind[did] = kind
        devices.append(DeviceRecord(device_id=did, kind=kind, room_id=rid))

    links = []
    seen_pairs: set[tuple[str, str]] = set()
    for i, entry in enumerate(_list(raw.get("links"), "links")):
        where = f"links[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("sensor_id", "gateway_id", "rssi_dbm", "wall_materials"), where)
        sid = _string(_require(entry, "sensor_id", where), f"{where}.sensor_id")
        gid = _string(_require(entry, "gateway_id", where), f"{where}.gateway_id")
        rssi = _finite(_require(entry, "rssi_dbm", where), f"{where}.rssi_dbm")
        for did, role in ((sid, "sensor"), (gid, "gateway")):
            if did not in seen_device_ids:
                raise DanglingReferenceError(f"{where}: unknown device {did!r}")
            if device_kind[did] != role:
                raise SchemaError(f"{where}: {did!r} is not a {role}")
        if (sid, gid) in seen_pairs:
            raise DuplicateIdError(f"duplicate link ({sid!r}, {gid!r})")
        seen_pairs.add((sid, gid))
        walls: tuple[str, ...] = ()
        if entry.get("wall_materials") is not None:
            walls = tuple(
                _string(m, f"{where}.wall_materials[{k}]")
                for k, m in enumerate(_list(entry["wall_materials"], f"{where}.wall_materials"))
            )
        links.append(LinkRecord(sensor_id=sid, gateway_id=gid, rssi_dbm=rssi, wall_materials=walls))

    materials = MaterialTable()
    if raw.get("materials") is not None:
        table = _obj(raw["materials"], "materials")
        entries = {}
        for name, value in table.items():
            att = _finite(value, f"materials[{name!r}]")
            if att < 0:
                raise SchemaError(f"materials[{name!r}]: attenuation must be >= 0")
            entries[_string(name, "materials key")] = att
        materials = MaterialTable(entries=entries)

    hints = []
    seen_hint_pairs: set[tuple[str, str]] = set()
    for i, entry in enumerate(_list(raw.get("adjacency_hints"), "adjacency_hints")):
        where = f"adjacency_hints[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("room_a", "room_b", "weight"), where)
        ra = _string(_require(entry, "room_a", where), f"{where}.room_a")
        rb = _string(_require(entry, "room_b", where), f"{where}.room_b")
        weight = 1.0
        if entry.get("weight") is not None:
            weight = _finite(entry["weight"], f"{where}.weight")
        if ra == rb:
            raise SchemaError(f"{where}: a room cannot be adjacent to itself")
        for rid in (ra, rb):
            if rid not in seen_room_ids:
                raise DanglingReferenceError(f"{where}: unknown room {rid!r}")
        if not (0.0 < weight <= 1.0):
            raise SchemaError(f"{where}.weight: must be in (0, 1]")
        pair = (ra, rb) if ra <= rb else (rb, ra)
        if pair in seen_hint_pairs:
            raise DuplicateIdError(f"duplicate adjacency hint for {pair!r}")
        seen_hint_pairs.add(pair)
        hints.append(AdjacencyHint(room_a=ra, room_b=rb, weight=weight))

    anchors = []
    for i, entry in enumerate(_list(raw.get("anchors"), "anchors")):
        where = f"anchors[{i}]"
        entry = _obj(entry, where)
        _only_keys(entry, ("node_id", "position_m", "hard"), where)
        nid = _string(_require(entry, "node_id", where), f"{where}.node_id")
        pos = _vec3(_require(entry, "position_m", where), f"{where}.position_m")
        hard = entry.get("hard", False)
        if not isinstance(hard, bool):
            raise SchemaError(f"{where}.hard: expected a boolean")
        if nid not in seen_device_ids and nid not in seen_room_ids:
            raise DanglingReferenceError(f"{where}: unknown node {nid!r}")
        anchors.append(AnchorHint(node_id=nid, position_m=pos, hard=hard))

    return MetadataDocument(
        schema_version=schema_version,
        building_id=building_id,
        floors=tuple(floors),
        rooms=tuple(rooms),
        devices=tuple(devices),
        links=tuple(links),
        materials=materials,
        adjacency_hints=tuple(hints),
        anchors=tuple(anchors),
    )


def document_to_dict(doc: MetadataDocument) -> dict:
    """Plain-JSON form with keys in canonical order; empty optional
    sections are omitted."""
    out: dict = {
        "schema_version": doc.schema_version,
        "building_id": doc.building_id,
        "floors": [
            {"floor_id": f.floor_id, "level_index": f.level_index} for f in doc.floors
        ],
        "rooms": [],
        "devices": [
            {"device_id": d.device_id, "kind": d.kind, "room_id": d.room_id}
            for d in doc.devices
        ],
    }
    for room in doc.rooms:
        entry: dict = {"room_id": room.room_id, "floor_id": room.floor_id, "label": room.label}
        if room.known_size is not None:
            entry["known_size"] = list(room.known_size)
        out["rooms"].append(entry)
    if doc.links:
        out["links"] = []
        for link in doc.links:
            entry = {
                "sensor_id": link.sensor_id,
                "gateway_id": link.gateway_id,
                "rssi_dbm": link.rssi_dbm,
            }
            if link.wall_materials:
                entry["wall_materials"] = list(link.wall_materials)
            out["links"].append(entry)
    if doc.materials.entries:
        out["materials"] = dict(sorted(doc.materials.entries.items()))
    if doc.adjacency_hints:
        out["adjacency_hints"] = [
            {"room_a": h.room_a, "room_b": h.room_b, "weight": h.weight}
            for h in doc.adjacency_hints
        ]
    if doc.anchors:
        out["anchors"] = [
            {"node_id": a.node_id, "position_m": list(a.position_m), "hard": a.hard}
            for a in doc.anchors
        ]
    return out


def serialize_document(doc: MetadataDocument) -> bytes:
    """Canonical bytes: fixed key order, compact separators, shortest
    round-trip float rendering.  parse_document inverts this exactly."""
    return json.dumps(document_to_dict(doc), separators=(",", ":"), allow_nan=False).encode("utf-8")
