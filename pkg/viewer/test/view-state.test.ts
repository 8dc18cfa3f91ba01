import { describe, expect, it, vi } from "vitest";

import referenceScene from "./fixtures/reference_scene.json";
import type { SceneDocument } from "../src/types";
import {
  ALL_LAYERS,
  adoptScene,
  initViewState,
  select,
  toggleFloor,
  toggleLayer,
} from "../src/view-state";
import { computeVisibleIds } from "../src/visibility";

const scene = referenceScene as unknown as SceneDocument;

describe("initViewState", () => {
  it("starts with every floor and layer visible and nothing selected", () => {
    const state = initViewState(scene);
    expect([...state.visibleFloors].sort()).toEqual([0, 1, 2]);
    for (const layer of ALL_LAYERS) expect(state.layers[layer]).toBe(true);
    expect(state.selected).toBeNull();
    expect(state.sceneVersion).toBe(scene.scene_version);
  });

  it("frames the envelope with the camera", () => {
    const state = initViewState(scene);
    expect(state.camera.distance).toBeGreaterThan(0);
  });
});

describe("toggleFloor", () => {
  it("hides exactly the geometry of the toggled level", () => {
    const before = computeVisibleIds(scene, initViewState(scene));
    const hidden = computeVisibleIds(scene, toggleFloor(scene, initViewState(scene), 2));

    const level2Rooms = scene.rooms.filter((r) => r.level_index === 2);
    const level2Devices = scene.nodes.filter(
      (n) => n.kind !== "room" && n.level_index === 2,
    );
    expect(level2Rooms.length).toBeGreaterThan(0);
    expect(level2Devices.length).toBeGreaterThan(0);

    for (const room of level2Rooms) {
      expect(hidden.has(`room/${room.room_id}`)).toBe(false);
      expect(hidden.has(`label/${room.room_id}`)).toBe(false);
    }
    for (const device of level2Devices) {
      expect(hidden.has(`device/${device.node_id}`)).toBe(false);
    }
    expect(hidden.has("floor/2")).toBe(false);

    // and nothing else disappeared
    const removed = [...before].filter((id) => !hidden.has(id));
    const level = new Map(scene.nodes.map((n) => [n.node_id, n.level_index]));
    for (const id of removed) {
      if (id.startsWith("room/") || id.startsWith("label/")) {
        const roomId = id.split("/")[1];
        expect(scene.rooms.find((r) => r.room_id === roomId)?.level_index).toBe(2);
      } else if (id.startsWith("device/")) {
        expect(level.get(id.split("/")[1])).toBe(2);
      } else if (id.startsWith("link/")) {
        const link = scene.links.find((l) => `link/${l.link_id}` === id)!;
        const touches2 = level.get(link.from) === 2 || level.get(link.to) === 2;
        expect(touches2).toBe(true);
      } else {
        expect(id).toBe("floor/2");
      }
    }
  });

  it("double toggle restores the exact previous state", () => {
    const start = initViewState(scene);
    const once = toggleFloor(scene, start, 1);
    const twice = toggleFloor(scene, once, 1);
    expect([...twice.visibleFloors].sort()).toEqual([...start.visibleFloors].sort());
    expect(computeVisibleIds(scene, twice)).toEqual(computeVisibleIds(scene, start));
  });

  it("ignores unknown levels with a console warning", () => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const start = initViewState(scene);
    const after = toggleFloor(scene, start, 99);
    expect(after).toBe(start);
    expect(warn).toHaveBeenCalledOnce();
    warn.mockRestore();
  });

  it("clears a selection that becomes hidden", () => {
    const device = scene.nodes.find((n) => n.kind === "sensor" && n.level_index === 1)!;
    let state = select(scene, initViewState(scene), device.node_id);
    expect(state.selected).toBe(device.node_id);
    state = toggleFloor(scene, state, 1);
    expect(state.selected).toBeNull();
  });

  it("keeps a selection on an unaffected floor", () => {
    const device = scene.nodes.find((n) => n.kind === "sensor" && n.level_index === 0)!;
    let state = select(scene, initViewState(scene), device.node_id);
    state = toggleFloor(scene, state, 1);
    expect(state.selected).toBe(device.node_id);
  });

  it("never mutates the input state", () => {
    const start = initViewState(scene);
    const floorsBefore = [...start.visibleFloors];
    toggleFloor(scene, start, 0);
    expect([...start.visibleFloors]).toEqual(floorsBefore);
  });
});

describe("toggleLayer", () => {
  it("rooms off hides room boxes but keeps devices", () => {
    const state = toggleLayer(scene, initViewState(scene), "rooms");
    const visible = computeVisibleIds(scene, state);
    for (const room of scene.rooms) {
      expect(visible.has(`room/${room.room_id}`)).toBe(false);
    }
    const someDevice = scene.nodes.find((n) => n.kind !== "room")!;
    expect(visible.has(`device/${someDevice.node_id}`)).toBe(true);
  });

  it("double toggle is the identity on the visible set", () => {
    const start = initViewState(scene);
    for (const layer of ALL_LAYERS) {
      const twice = toggleLayer(scene, toggleLayer(scene, start, layer), layer);
      expect(computeVisibleIds(scene, twice)).toEqual(computeVisibleIds(scene, start));
    }
  });

  it("clears a selected device when devices are hidden", () => {
    const device = scene.nodes.find((n) => n.kind === "gateway")!;
    let state = select(scene, initViewState(scene), device.node_id);
    state = toggleLayer(scene, state, "devices");
    expect(state.selected).toBeNull();
  });
});

describe("computeVisibleIds", () => {
  it("covers every renderable id when everything is on", () => {
    const visible = computeVisibleIds(scene, initViewState(scene));
    const expected =
      scene.rooms.length * 2 + // box + label
      scene.nodes.filter((n) => n.kind !== "room").length +
      scene.links.length +
      scene.floors.length +
      1; // envelope
    expect(visible.size).toBe(expected);
  });

  it("hides links when either endpoint's floor is hidden", () => {
    const state = toggleFloor(scene, initViewState(scene), 0);
    const visible = computeVisibleIds(scene, state);
    const level = new Map(scene.nodes.map((n) => [n.node_id, n.level_index]));
    for (const link of scene.links) {
      const shouldShow = level.get(link.from) !== 0 && level.get(link.to) !== 0;
      expect(visible.has(`link/${link.link_id}`)).toBe(shouldShow);
    }
  });

  it("empty scene yields an empty visible set", () => {
    const empty: SceneDocument = {
      scene_version: "v",
      building_id: "b",
      nodes: [],
      links: [],
      rooms: [],
      floors: [],
      envelope: null,
      warnings: [],
    };
    expect(computeVisibleIds(empty, initViewState(empty)).size).toBe(0);
  });
});

describe("adoptScene", () => {
  it("preserves camera, hidden floors and a surviving selection", () => {
    const room = scene.rooms[0];
    let state = select(scene, initViewState(scene), room.room_id);
    state = toggleFloor(scene, state, 2);
    const updated: SceneDocument = { ...scene, scene_version: "next" };
    const adopted = adoptScene(state, scene, updated);
    expect(adopted.sceneVersion).toBe("next");
    expect(adopted.camera).toEqual(state.camera);
    expect(adopted.visibleFloors.has(2)).toBe(false);
    expect(adopted.selected).toBe(room.room_id);
  });

  it("clears a selection that vanished from the new scene", () => {
    const device = scene.nodes.find((n) => n.kind === "sensor")!;
    const state = select(scene, initViewState(scene), device.node_id);
    const smaller: SceneDocument = {
      ...scene,
      scene_version: "next",
      nodes: scene.nodes.filter((n) => n.node_id !== device.node_id),
      links: scene.links.filter((l) => l.from !== device.node_id && l.to !== device.node_id),
    };
    expect(adoptScene(state, scene, smaller).selected).toBeNull();
  });

  it("new floors start visible", () => {
    const state = initViewState(scene);
    const extended: SceneDocument = {
      ...scene,
      scene_version: "next",
      floors: [...scene.floors, { level_index: 3, plane_y: 12, extent: scene.floors[0].extent }],
    };
    expect(adoptScene(state, scene, extended).visibleFloors.has(3)).toBe(true);
  });
});
