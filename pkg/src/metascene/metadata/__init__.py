"""Metadata ingestion: parsing, validation, path loss, adjacency, synthesis."""

from .adjacency import infer_adjacency, signal_quality
from .parse import document_to_dict, parse_document, serialize_document
from .pathloss import PathLossParams, corrected_rssi, path_loss_from_dict, rssi_to_distance
from .synthetic import generate_synthetic
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

__all__ = [
    "AdjacencyHint",
    "AnchorHint",
    "DeviceRecord",
    "FloorRecord",
    "LinkRecord",
    "MaterialTable",
    "MetadataDocument",
    "PathLossParams",
    "RoomRecord",
    "corrected_rssi",
    "document_to_dict",
    "generate_synthetic",
    "infer_adjacency",
    "parse_document",
    "path_loss_from_dict",
    "rssi_to_distance",
    "serialize_document",
    "signal_quality",
]
