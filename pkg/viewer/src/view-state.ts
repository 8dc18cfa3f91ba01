/**
 * Pure view state and transitions.
 *
 * Every transition is (state, action) -> new state with no side effects
 * beyond a console warning for unknown floors, so the toggle logic is
 * unit-testable without a rendering context. Toggling never mutates the
 * scene document itself.
 */

import type { SceneDocument, Vec3 } from "./types";

export type LayerName = "rooms" | "devices" | "links" | "slabs" | "envelope" | "labels";

export const ALL_LAYERS: readonly LayerName[] = [
  "rooms", "devices", "links", "slabs", "envelope", "labels",
];

export interface OrbitCamera {
  target: Vec3;
  distance: number;
  azimuth: number;
  elevation: number;
}

export interface ViewState {
  camera: OrbitCamera;
  visibleFloors: ReadonlySet<number>;
  layers: Readonly<Record<LayerName, boolean>>;
  selected: string | null; // node_id or room_id
  sceneVersion: string;
}

function floorsInScene(scene: SceneDocument): Set<number> {
  const levels = new Set<number>();
  for (const floor of scene.floors) levels.add(floor.level_index);
  for (const node of scene.nodes) levels.add(node.level_index);
  for (const room of scene.rooms) levels.add(room.level_index);
  return levels;
}

export function initViewState(scene: SceneDocument): ViewState {
  const env = scene.envelope;
  const target: Vec3 = env
    ? [
        (env.min[0] + env.max[0]) / 2,
        (env.min[1] + env.max[1]) / 2,
        (env.min[2] + env.max[2]) / 2,
      ]
    : [0, 0, 0];
  const span = env
    ? Math.max(env.max[0] - env.min[0], env.max[1] - env.min[1], env.max[2] - env.min[2])
    : 20;
  return {
    camera: { target, distance: span * 1.6, azimuth: Math.PI / 4, elevation: Math.PI / 5 },
    visibleFloors: floorsInScene(scene),
    layers: {
      rooms: true,
      devices: true,
      links: true,
      slabs: true,
      envelope: true,
      labels: true,
    },
    selected: null,
    sceneVersion: scene.scene_version,
  };
}

function selectionLevel(scene: SceneDocument, selected: string): number | null {
  for (const node of scene.nodes) if (node.node_id === selected) return node.level_index;
  for (const room of scene.rooms) if (room.room_id === selected) return room.level_index;
  return null;
}

function selectionLayer(scene: SceneDocument, selected: string): LayerName | null {
  for (const node of scene.nodes) {
    if (node.node_id === selected) return node.kind === "room" ? "rooms" : "devices";
  }
  for (const room of scene.rooms) if (room.room_id === selected) return "rooms";
  return null;
}

/** Hide or show one floor; unknown levels are ignored with a warning. */
export function toggleFloor(scene: SceneDocument, state: ViewState, level: number): ViewState {
  if (!floorsInScene(scene).has(level)) {
    console.warn(`toggleFloor: level ${level} not present in scene`);
    return state;
  }
  const visible = new Set(state.visibleFloors);
  if (visible.has(level)) {
    visible.delete(level);
  } else {
    visible.add(level);
  }
  let selected = state.selected;
  if (selected !== null) {
    const lvl = selectionLevel(scene, selected);
    if (lvl !== null && !visible.has(lvl)) selected = null;
  }
  return { ...state, visibleFloors: visible, selected };
}

/** Flip one geometry layer; a selection hidden by the flip is cleared. */
export function toggleLayer(scene: SceneDocument, state: ViewState, layer: LayerName): ViewState {
  const layers = { ...state.layers, [layer]: !state.layers[layer] };
  let selected = state.selected;
  if (selected !== null && !layers[selectionLayer(scene, selected) ?? "rooms"]) {
    selected = null;
  }
  return { ...state, layers, selected };
}

export function select(scene: SceneDocument, state: ViewState, id: string | null): ViewState {
  if (id === null) return { ...state, selected: null };
  const known =
    scene.nodes.some((n) => n.node_id === id) || scene.rooms.some((r) => r.room_id === id);
  if (!known) {
    console.warn(`select: ${id} not present in scene`);
    return state;
  }
  return { ...state, selected: id };
}

/**
 * Adopt a newly fetched scene version, preserving camera and toggle
 * state. Floors the user hid stay hidden if they still exist; floors
 * new to this scene start visible; a selection that vanished clears.
 */
export function adoptScene(
  state: ViewState,
  oldScene: SceneDocument,
  newScene: SceneDocument,
): ViewState {
  const oldLevels = floorsInScene(oldScene);
  const visible = new Set<number>();
  for (const level of floorsInScene(newScene)) {
    if (!oldLevels.has(level) || state.visibleFloors.has(level)) visible.add(level);
  }
  const stillThere =
    state.selected !== null &&
    (newScene.nodes.some((n) => n.node_id === state.selected) ||
      newScene.rooms.some((r) => r.room_id === state.selected));
  return {
    ...state,
    visibleFloors: visible,
    sceneVersion: newScene.scene_version,
    selected: stillThere ? state.selected : null,
  };
}
