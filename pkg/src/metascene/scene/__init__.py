"""Scene export: canonical JSON document, colors, glTF."""

from .colors import STRUCTURAL_GRAY, ColorRamp, color_for_rssi
from .document import (
    LinkEntry,
    NodeEntry,
    SceneDocument,
    parse_scene_json,
    scene_to_dict,
    scene_version_hash,
    to_scene_json,
)
from .gltf import to_gltf

__all__ = [
    "ColorRamp",
    "LinkEntry",
    "NodeEntry",
    "STRUCTURAL_GRAY",
    "SceneDocument",
    "color_for_rssi",
    "parse_scene_json",
    "scene_to_dict",
    "scene_version_hash",
    "to_gltf",
    "to_scene_json",
]
