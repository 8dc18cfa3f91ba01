"""End-to-end pipeline: metadata document to converged scene."""

from __future__ import annotations

from .config import Config
from .metadata.adjacency import infer_adjacency
from .metadata.pathloss import PathLossParams
from .metadata.types import MetadataDocument
from .scene.document import SceneDocument
from .sim.engine import run_to_convergence
from .sim.graph import build_sim_graph
from .skin import build_scene


def simulate_scene(
    doc: MetadataDocument,
    config: Config = Config(),
    params: PathLossParams = PathLossParams(),
) -> tuple[SceneDocument, int]:
    """Parse-to-scene: build the graph (with inferred adjacency), run the
    simulation to convergence, skin the result.  Returns (scene, ticks).
    Deterministic for fixed (doc, config, params)."""
    hints = infer_adjacency(doc)
    graph = build_sim_graph(doc, params, config, adjacency=hints)
    state, ticks = run_to_convergence(graph, config)
    return build_scene(graph, state, doc, config), ticks
