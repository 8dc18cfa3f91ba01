"""Simulation and skinning constants with documented defaults.

Everything tunable lives here.  A config file is UTF-8 JSON whose keys
mirror the field names below; absent fields keep their defaults, unknown
keys are rejected.  Path-loss calibration may be nested under the
optional "path_loss" key.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

from .errors import SchemaError


@dataclass(frozen=True)
class Config:
    # Integration
    dt: float = 1.0                      # simulation-time units per tick
    alpha0: float = 1.0                  # initial cooling factor
    alpha_min: float = 0.001             # convergence threshold
    alpha_decay: float = 0.0228          # geometric decay per tick (0 disables cooling)
    velocity_decay: float = 0.6          # velocity fraction retained per tick
    max_ticks: int = 1000
    seed: int = 42

    # Force constants
    link_stiffness_signal: float = 0.7
    link_stiffness_structural: float = 0.3
    adjacency_stiffness_scale: float = 0.2   # per unit hint weight
    charge_device: float = -30.0
    charge_room: float = 0.0
    room_repulsion_k: float = 200.0
    same_room_attraction_k: float = 0.05
    floor_repulsion_enabled: bool = False
    floor_repulsion_k: float = 50.0
    anchor_stiffness: float = 1.0            # soft-anchor spring constant

    # Geometry / constraints
    floor_height_m: float = 4.0
    floor_pinning_enabled: bool = True
    theta: float = 0.5                       # Barnes-Hut opening angle; 0 = exact
    collision_iterations: int = 3
    sensor_radius_m: float = 0.25
    gateway_radius_m: float = 0.4
    mass_device: float = 1.0
    mass_room: float = 4.0
    structural_rest_length_m: float = 1.0    # device <-> room-node springs
    adjacency_rest_length_m: float = 8.0     # room <-> room hint springs

    # Skinning
    room_padding_min_m: float = 0.5
    room_padding_frac: float = 0.1           # of each extent, per side
    min_room_extent_m: float = 1.0           # degenerate boxes grow to this cube
    envelope_padding_m: float = 1.0
    slab_thickness_m: float = 0.1

    def validate(self) -> None:
        if not (self.dt > 0):
            raise SchemaError("dt must be > 0")
        if not (0.0 <= self.alpha_decay < 1.0):
            raise SchemaError("alpha_decay must be in [0, 1)")
        if not (0.0 < self.alpha_min < self.alpha0):
            raise SchemaError("alpha_min must be in (0, alpha0)")
        if not (0.0 < self.velocity_decay <= 1.0):
            raise SchemaError("velocity_decay must be in (0, 1]")
        if not (0.0 <= self.theta <= 1.0):
            raise SchemaError("theta must be in [0, 1]")
        if self.collision_iterations < 1:
            raise SchemaError("collision_iterations must be >= 1")
        if self.max_ticks < 1:
            raise SchemaError("max_ticks must be >= 1")
        for name in (
            "floor_height_m", "mass_device", "mass_room",
            "structural_rest_length_m", "adjacency_rest_length_m",
        ):
            if not (getattr(self, name) > 0):
                raise SchemaError(f"{name} must be > 0")
        for name in (
            "sensor_radius_m", "gateway_radius_m", "room_padding_min_m",
            "room_padding_frac", "min_room_extent_m", "envelope_padding_m",
            "slab_thickness_m", "room_repulsion_k", "same_room_attraction_k",
            "floor_repulsion_k", "anchor_stiffness",
            "link_stiffness_signal", "link_stiffness_structural",
            "adjacency_stiffness_scale",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise SchemaError(f"{name} must be finite and >= 0")

    def replace(self, **kwargs) -> "Config":
        cfg = dataclasses.replace(self, **kwargs)
        cfg.validate()
        return cfg

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_NAMES = {f.name for f in dataclasses.fields(Config)}
_INT_FIELDS = {"max_ticks", "seed", "collision_iterations"}
_BOOL_FIELDS = {"floor_repulsion_enabled", "floor_pinning_enabled"}


def config_from_dict(raw: dict) -> Config:
    """Build a validated Config from a parsed JSON object.

    The optional "path_loss" key is ignored here; callers that need it
    use :func:`metascene.metadata.pathloss.path_loss_from_dict`.
    """
    if not isinstance(raw, dict):
        raise SchemaError("config must be a JSON object")
    kwargs = {}
    for key, value in raw.items():
        if key == "path_loss":
            continue
        if key not in _FIELD_NAMES:
            raise SchemaError(f"unknown config key: {key!r}")
        if key in _BOOL_FIELDS:
            if not isinstance(value, bool):
                raise SchemaError(f"config key {key!r} must be a boolean")
            kwargs[key] = value
        elif key in _INT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise SchemaError(f"config key {key!r} must be an integer")
            kwargs[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SchemaError(f"config key {key!r} must be a number")
            kwargs[key] = float(value)
    cfg = Config(**kwargs)
    cfg.validate()
    return cfg


def load_config(path: str) -> Config:
    """Read a config file; absent fields take the documented defaults."""
    with open(path, "rb") as fh:
        text = fh.read()
    try:
        raw = json.loads(text.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"config file is not valid UTF-8 JSON: {exc}") from exc
    return config_from_dict(raw)
