"""Record types for the ingested building metadata document."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class FloorRecord:
    floor_id: str
    level_index: int  # 0 = ground, increasing upward


@dataclass(frozen=True)
class RoomRecord:
    room_id: str
    floor_id: str
    label: str
    known_size: Optional[tuple[float, float, float]] = None  # (width, depth, height) m


@dataclass(frozen=True)
class DeviceRecord:
    device_id: str
    kind: str  # "sensor" | "gateway"
    room_id: str


@dataclass(frozen=True)
class LinkRecord:
    sensor_id: str
    gateway_id: str
    rssi_dbm: float
    wall_materials: tuple[str, ...] = ()


@dataclass(frozen=True)
class MaterialTable:
    """Per-material one-wall traversal loss in dB."""

    entries: dict[str, float] = field(default_factory=dict)

    def attenuation(self, name: str) -> float:
        return self.entries[name]


@dataclass(frozen=True)
class AdjacencyHint:
    room_a: str
    room_b: str
    weight: float = 1.0  # in (0, 1]

    def pair(self) -> tuple[str, str]:
        return (self.room_a, self.room_b) if self.room_a <= self.room_b else (self.room_b, self.room_a)


@dataclass(frozen=True)
class AnchorHint:
    node_id: str  # a device or room id
    position_m: tuple[float, float, float]
    hard: bool = False


@dataclass(frozen=True)
class MetadataDocument:
    schema_version: str
    building_id: str
    floors: tuple[FloorRecord, ...]
    rooms: tuple[RoomRecord, ...]
    devices: tuple[DeviceRecord, ...]
    links: tuple[LinkRecord, ...] = ()
    materials: MaterialTable = field(default_factory=MaterialTable)
    adjacency_hints: tuple[AdjacencyHint, ...] = ()
    anchors: tuple[AnchorHint, ...] = ()

    def room_by_id(self) -> dict[str, RoomRecord]:
        return {r.room_id: r for r in self.rooms}

    def device_by_id(self) -> dict[str, DeviceRecord]:
        return {d.device_id: d for d in self.devices}

    def floor_by_id(self) -> dict[str, FloorRecord]:
        return {f.floor_id: f for f in self.floors}
