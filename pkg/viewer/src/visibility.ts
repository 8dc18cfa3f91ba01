/**
 * Maps (scene, view state) to the set of renderable object ids that
 * should currently be visible. The renderer names every Object3D with
 * one of these ids and simply applies the set, so visibility policy
 * lives here and is testable without three.js.
 *
 * Id scheme: room/<room_id>, label/<room_id>, device/<node_id>,
 * link/<link_id>, floor/<level_index>, envelope.
 */

import type { SceneDocument } from "./types";
import type { ViewState } from "./view-state";

export function computeVisibleIds(scene: SceneDocument, state: ViewState): Set<string> {
  const out = new Set<string>();
  const floors = state.visibleFloors;
  const layers = state.layers;

  for (const room of scene.rooms) {
    if (!floors.has(room.level_index)) continue;
    if (layers.rooms) out.add(`room/${room.room_id}`);
    if (layers.labels) out.add(`label/${room.room_id}`);
  }

  const nodeLevel = new Map<string, number>();
  for (const node of scene.nodes) {
    nodeLevel.set(node.node_id, node.level_index);
    if (node.kind === "room") continue; // room particles render as boxes
    if (layers.devices && floors.has(node.level_index)) {
      out.add(`device/${node.node_id}`);
    }
  }

  if (layers.links) {
    for (const link of scene.links) {
      const a = nodeLevel.get(link.from);
      const b = nodeLevel.get(link.to);
      if (a !== undefined && b !== undefined && floors.has(a) && floors.has(b)) {
        out.add(`link/${link.link_id}`);
      }
    }
  }

  if (layers.slabs) {
    for (const floor of scene.floors) {
      if (floors.has(floor.level_index)) out.add(`floor/${floor.level_index}`);
    }
  }

  if (layers.envelope && scene.envelope !== null) {
    out.add("envelope");
  }

  return out;
}
