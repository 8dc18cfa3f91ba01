"""Synthetic metadata documents at case-study scale.

The generator is a pure function of its arguments: identical counts and
seed give byte-identical serialized documents on every platform.  RSSI
values come from the repo's SplitMix64 stream, uniform in [-90, -40]
dBm, rounded to 0.1 dB.
"""

from __future__ import annotations

from ..errors import ArgumentError
from ..rng import SplitMix64
from .types import DeviceRecord, FloorRecord, LinkRecord, MetadataDocument, RoomRecord

RSSI_LO_DBM = -90.0
RSSI_HI_DBM = -40.0


def generate_synthetic(
    rooms: int,
    sensors: int,
    gateways: int,
    floors: int,
    seed: int,
) -> MetadataDocument:
    """Deterministic synthetic building.

    Rooms round-robin across floors, sensors round-robin across rooms,
    gateways round-robin across floors (then across that floor's rooms).
    Every sensor links to the gateway on its floor whose room index is
    nearest its own; floors without a gateway get no links.
    """
    if rooms < 0 or sensors < 0 or gateways < 0:
        raise ArgumentError("room/sensor/gateway counts must be >= 0")
    if floors < 1 and rooms > 0:
        raise ArgumentError("floors must be >= 1 when rooms > 0")
    if floors < 0:
        raise ArgumentError("floors must be >= 0")
    if rooms == 0 and (sensors > 0 or gateways > 0):
        raise ArgumentError("devices need at least one room")

    floor_records = tuple(
        FloorRecord(floor_id=f"F{i}", level_index=i) for i in range(floors if rooms else 0)
    )
    room_records = tuple(
        RoomRecord(room_id=f"R{i:03d}", floor_id=f"F{i % floors}", label=f"Room {i}")
        for i in range(rooms)
    )

    devices: list[DeviceRecord] = []
    for i in range(sensors):
        devices.append(
            DeviceRecord(device_id=f"S{i:03d}", kind="sensor", room_id=room_records[i % rooms].room_id)
        )

    # Gateways spread over floors first so every covered floor gets one
    # as long as gateways >= floors; then cycle that floor's rooms.
    rooms_on_floor: dict[int, list[int]] = {}
    for idx, room in enumerate(room_records):
        rooms_on_floor.setdefault(idx % floors, []).append(idx)
    gateway_room_idx: list[int] = []
    for g in range(gateways):
        level = g % floors
        candidates = rooms_on_floor.get(level)
        if not candidates:
            candidates = rooms_on_floor[min(rooms_on_floor)]
        room_idx = candidates[(g // floors) % len(candidates)]
        gateway_room_idx.append(room_idx)
        devices.append(
            DeviceRecord(device_id=f"G{g:02d}", kind="gateway", room_id=room_records[room_idx].room_id)
        )

    rng = SplitMix64(seed)
    links: list[LinkRecord] = []
    seen: set[tuple[str, str]] = set()
    for i in range(sensors):
        room_idx = i % rooms
        level = room_idx % floors
        eligible = [g for g in range(gateways) if g % floors == level]
        if not eligible:
            continue
        g = min(eligible, key=lambda g: (abs(gateway_room_idx[g] - room_idx), g))
        pair = (f"S{i:03d}", f"G{g:02d}")
        rssi = round(rng.uniform(RSSI_LO_DBM, RSSI_HI_DBM), 1)
        if pair in seen:
            continue
        seen.add(pair)
        links.append(LinkRecord(sensor_id=pair[0], gateway_id=pair[1], rssi_dbm=rssi))

    return MetadataDocument(
        schema_version="1.0",
        building_id=f"synthetic-{rooms}r-{sensors}s-{gateways}g-{floors}f-{seed}",
        floors=floor_records,
        rooms=room_records,
        devices=tuple(devices),
        links=tuple(links),
    )
