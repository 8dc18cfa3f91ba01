"""Signal-strength link coloring: red (weak) to green (strong)."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SchemaError

STRUCTURAL_GRAY = (128, 128, 128)  # links without an RSSI reading

RED = (255, 0, 0)
GREEN = (0, 255, 0)


@dataclass(frozen=True)
class ColorRamp:
    rssi_low: float = -100.0   # mapped to red
    rssi_high: float = -30.0   # mapped to green

    def __post_init__(self):
        if not (self.rssi_low < self.rssi_high):
            raise SchemaError("color ramp rssi_low must be < rssi_high")


def color_for_rssi(rssi_dbm: float, ramp: ColorRamp = ColorRamp()) -> tuple[int, int, int]:
    """Linear red-to-green interpolation, clamped outside the ramp.
    Rounding is half-up so the midpoint lands on (128, 128, 0)."""
    t = (rssi_dbm - ramp.rssi_low) / (ramp.rssi_high - ramp.rssi_low)
    t = min(max(t, 0.0), 1.0)
    r = int(255.0 * (1.0 - t) + 0.5)
    g = int(255.0 * t + 0.5)
    return (r, g, 0)
