"""Axis-aligned geometry shared by skinning and scene export."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Aabb:
    min: tuple[float, float, float]
    max: tuple[float, float, float]

    def __post_init__(self):
        if any(lo > hi for lo, hi in zip(self.min, self.max)):
            raise ValueError("Aabb min must be <= max component-wise")

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(
            min=tuple(min(a, b) for a, b in zip(self.min, other.min)),
            max=tuple(max(a, b) for a, b in zip(self.max, other.max)),
        )

    def expanded(self, pad: float) -> "Aabb":
        return Aabb(
            min=tuple(v - pad for v in self.min),
            max=tuple(v + pad for v in self.max),
        )

    def center(self) -> tuple[float, float, float]:
        return tuple((lo + hi) * 0.5 for lo, hi in zip(self.min, self.max))

    def size(self) -> tuple[float, float, float]:
        return tuple(hi - lo for lo, hi in zip(self.min, self.max))

    def contains_point(self, p, tol: float = 0.0) -> bool:
        return all(lo - tol <= v <= hi + tol for v, lo, hi in zip(p, self.min, self.max))

    def contains_box(self, other: "Aabb", tol: float = 0.0) -> bool:
        return all(a - tol <= b for a, b in zip(self.min, other.min)) and all(
            b <= a + tol for a, b in zip(self.max, other.max)
        )

    def intersection_volume(self, other: "Aabb") -> float:
        vol = 1.0
        for lo_a, hi_a, lo_b, hi_b in zip(self.min, self.max, other.min, other.max):
            overlap = min(hi_a, hi_b) - max(lo_a, lo_b)
            if overlap <= 0.0:
                return 0.0
            vol *= overlap
        return vol


@dataclass(frozen=True)
class RoomBox:
    room_id: str
    box: Aabb
    label: str
    level_index: int


@dataclass(frozen=True)
class FloorSlab:
    level_index: int
    plane_y: float
    extent: Aabb
