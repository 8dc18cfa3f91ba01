"""metascene: metadata-driven 3D building visualization.

Ingests IoT/BMS network metadata, lays it out with a Velocity Verlet
force simulation, skins the converged cloud with room boxes, floor
slabs and a building envelope, and serves the result as a versioned
scene document.
"""

from .config import Config, config_from_dict, load_config
from .errors import (
    ArgumentError,
    DanglingReferenceError,
    DuplicateIdError,
    EmptyBuildingError,
    EmptyRoomError,
    MetadataSyntaxError,
    MetasceneError,
    NonFiniteStateError,
    SceneFormatError,
    SchemaError,
    UnknownMaterialError,
)
from .geometry import Aabb, FloorSlab, RoomBox
from .metadata import (
    AdjacencyHint,
    AnchorHint,
    DeviceRecord,
    FloorRecord,
    LinkRecord,
    MaterialTable,
    MetadataDocument,
    PathLossParams,
    RoomRecord,
    corrected_rssi,
    generate_synthetic,
    infer_adjacency,
    parse_document,
    rssi_to_distance,
    serialize_document,
)
from .pipeline import simulate_scene
from .scene import (
    ColorRamp,
    SceneDocument,
    color_for_rssi,
    parse_scene_json,
    to_gltf,
    to_scene_json,
)
from .sim import (
    SimGraph,
    SimLink,
    SimNode,
    SimulationState,
    backend_name,
    build_sim_graph,
    init_positions,
    run_to_convergence,
    step,
)
from .skin import build_scene, building_aabb, floor_slabs, room_aabb

__version__ = "0.1.0"

__all__ = [
    "Aabb",
    "AdjacencyHint",
    "AnchorHint",
    "ArgumentError",
    "ColorRamp",
    "Config",
    "DanglingReferenceError",
    "DeviceRecord",
    "DuplicateIdError",
    "EmptyBuildingError",
    "EmptyRoomError",
    "FloorRecord",
    "FloorSlab",
    "LinkRecord",
    "MaterialTable",
    "MetadataDocument",
    "MetadataSyntaxError",
    "MetasceneError",
    "NonFiniteStateError",
    "PathLossParams",
    "RoomBox",
    "RoomRecord",
    "SceneDocument",
    "SceneFormatError",
    "SchemaError",
    "SimGraph",
    "SimLink",
    "SimNode",
    "SimulationState",
    "UnknownMaterialError",
    "backend_name",
    "build_scene",
    "build_sim_graph",
    "building_aabb",
    "color_for_rssi",
    "config_from_dict",
    "corrected_rssi",
    "floor_slabs",
    "generate_synthetic",
    "infer_adjacency",
    "init_positions",
    "load_config",
    "parse_document",
    "parse_scene_json",
    "room_aabb",
    "rssi_to_distance",
    "run_to_convergence",
    "serialize_document",
    "simulate_scene",
    "step",
    "to_gltf",
    "to_scene_json",
]
