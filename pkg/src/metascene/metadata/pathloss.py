"""RSSI to distance via the log-distance path-loss model.

A link's measured power p (dBm) maps to a free-space distance

    d = d0 * 10^((p0 - p) / (10 * n))

clamped to [d_min, d_max] so outlier readings cannot produce degenerate
spring rest lengths.  Wall losses are added back onto the RSSI before
conversion, so one formula covers both corrected and uncorrected links.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SchemaError, UnknownMaterialError
from .types import LinkRecord, MaterialTable


@dataclass(frozen=True)
class PathLossParams:
    d0_m: float = 1.0        # reference distance
    p0_dbm: float = -40.0    # RSSI at d0
    exponent_n: float = 2.0  # path-loss exponent
    d_min_m: float = 0.3
    d_max_m: float = 30.0

    def validate(self) -> None:
        if not (self.d0_m > 0 and self.exponent_n > 0 and self.d_min_m > 0):
            raise SchemaError("path-loss d0_m, exponent_n and d_min_m must be > 0")
        if not (self.d_min_m < self.d_max_m):
            raise SchemaError("path-loss d_min_m must be < d_max_m")


_PL_FIELDS = ("d0_m", "p0_dbm", "exponent_n", "d_min_m", "d_max_m")


def path_loss_from_dict(raw: dict) -> PathLossParams:
    if not isinstance(raw, dict):
        raise SchemaError("path_loss must be a JSON object")
    kwargs = {}
    for key, value in raw.items():
        if key not in _PL_FIELDS:
            raise SchemaError(f"unknown path_loss key: {key!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"path_loss key {key!r} must be a number")
        kwargs[key] = float(value)
    params = PathLossParams(**kwargs)
    params.validate()
    return params


def rssi_to_distance(rssi_dbm: float, params: PathLossParams = PathLossParams()) -> float:
    """Distance in meters for a measured RSSI; monotone non-increasing
    in rssi before clamping."""
    d = params.d0_m * 10.0 ** ((params.p0_dbm - rssi_dbm) / (10.0 * params.exponent_n))
    return min(max(d, params.d_min_m), params.d_max_m)


def corrected_rssi(link: LinkRecord, materials: MaterialTable) -> float:
    """RSSI with per-wall attenuation added back, approximating the
    free-space power the link would show without obstructions."""
    rssi = link.rssi_dbm
    for name in link.wall_materials:
        if name not in materials.entries:
            raise UnknownMaterialError(
                f"link ({link.sensor_id!r}, {link.gateway_id!r}) crosses unknown material {name!r}"
            )
        rssi += materials.entries[name]
    return rssi
