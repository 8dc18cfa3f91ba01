import { describe, expect, it, vi } from "vitest";

import referenceScene from "./fixtures/reference_scene.json";
import { SceneWatcher, type FetchLike } from "../src/refresh";
import type { SceneDocument } from "../src/types";

const sceneA = referenceScene as unknown as SceneDocument;
const sceneB: SceneDocument = { ...sceneA, scene_version: "version-b" };

interface Route {
  version: string;
  scene: SceneDocument;
  fail?: boolean;
}

function makeFetch(route: { current: Route }) {
  const sceneCalls: Array<Record<string, string>> = [];
  const fetchFn: FetchLike = async (url, init) => {
    if (route.current.fail) throw new Error("connection refused");
    if (url.endsWith("/api/version")) {
      return {
        ok: true,
        status: 200,
        headers: { get: () => null },
        json: async () => ({
          scene_version: route.current.version,
          tick_count: 300,
          last_poll: 0,
        }),
      };
    }
    if (url.endsWith("/api/scene")) {
      sceneCalls.push(init?.headers ?? {});
      const inm = init?.headers?.["If-None-Match"];
      if (inm === route.current.version) {
        return {
          ok: false,
          status: 304,
          headers: { get: () => route.current.version },
          json: async () => ({}),
        };
      }
      return {
        ok: true,
        status: 200,
        headers: { get: () => route.current.version },
        json: async () => route.current.scene,
      };
    }
    throw new Error(`unexpected url ${url}`);
  };
  return { fetchFn, sceneCalls };
}

describe("SceneWatcher", () => {
  it("loads the initial scene and records its version", async () => {
    const route: { current: Route } = { current: { version: sceneA.scene_version, scene: sceneA } };
    const { fetchFn } = makeFetch(route);
    const onScene = vi.fn();
    const watcher = new SceneWatcher("http://x", { onScene }, fetchFn);
    await watcher.loadInitial();
    expect(onScene).toHaveBeenCalledWith(sceneA);
    expect(watcher.lastVersion).toBe(sceneA.scene_version);
  });

  it("does not refetch the scene when the version is unchanged", async () => {
    const route: { current: Route } = { current: { version: sceneA.scene_version, scene: sceneA } };
    const { fetchFn, sceneCalls } = makeFetch(route);
    const onScene = vi.fn();
    const watcher = new SceneWatcher("http://x", { onScene }, fetchFn);
    await watcher.loadInitial();
    expect(sceneCalls.length).toBe(1);

    expect(await watcher.pollOnce()).toBe("unchanged");
    expect(await watcher.pollOnce()).toBe("unchanged");
    expect(sceneCalls.length).toBe(1); // version endpoint only, no scene refetch
    expect(onScene).toHaveBeenCalledTimes(1);
  });

  it("refetches with If-None-Match when the version changes", async () => {
    const route: { current: Route } = { current: { version: sceneA.scene_version, scene: sceneA } };
    const { fetchFn, sceneCalls } = makeFetch(route);
    const onScene = vi.fn();
    const watcher = new SceneWatcher("http://x", { onScene }, fetchFn);
    await watcher.loadInitial();

    route.current = { version: "version-b", scene: sceneB };
    expect(await watcher.pollOnce()).toBe("updated");
    expect(sceneCalls.length).toBe(2);
    expect(sceneCalls[1]["If-None-Match"]).toBe(sceneA.scene_version);
    expect(onScene).toHaveBeenLastCalledWith(sceneB);
    expect(watcher.lastVersion).toBe("version-b");
  });

  it("keeps the last scene and reports staleness on poll failure", async () => {
    const route: { current: Route } = { current: { version: sceneA.scene_version, scene: sceneA } };
    const { fetchFn } = makeFetch(route);
    const onScene = vi.fn();
    const onStale = vi.fn();
    const onRecovered = vi.fn();
    const watcher = new SceneWatcher("http://x", { onScene, onStale, onRecovered }, fetchFn);
    await watcher.loadInitial();

    route.current = { ...route.current, fail: true };
    expect(await watcher.pollOnce(1000)).toBe("failed");
    expect(await watcher.pollOnce(2000)).toBe("failed");
    expect(onStale).toHaveBeenCalledTimes(2);
    expect(onStale).toHaveBeenLastCalledWith(1000); // stale since the first failure
    expect(onScene).toHaveBeenCalledTimes(1); // old scene kept
    expect(watcher.lastVersion).toBe(sceneA.scene_version);

    route.current = { version: sceneA.scene_version, scene: sceneA };
    expect(await watcher.pollOnce(3000)).toBe("unchanged");
    expect(onRecovered).toHaveBeenCalledTimes(1);
    expect(watcher.staleSince).toBeNull();
  });

  it("treats a racing 304 as unchanged", async () => {
    const route: { current: Route } = { current: { version: sceneA.scene_version, scene: sceneA } };
    const base = makeFetch(route);
    // version endpoint reports b, but the scene fetch 304s against a
    const fetchFn: FetchLike = async (url) => {
      if (url.endsWith("/api/version")) {
        return {
          ok: true,
          status: 200,
          headers: { get: () => null },
          json: async () => ({ scene_version: "version-b", tick_count: 1, last_poll: 0 }),
        };
      }
      return {
        ok: false,
        status: 304,
        headers: { get: () => null },
        json: async () => ({}),
      };
    };
    const onScene = vi.fn();
    const watcher = new SceneWatcher("http://x", { onScene }, base.fetchFn);
    await watcher.loadInitial();
    const racer = new SceneWatcher("http://x", { onScene }, fetchFn);
    racer.lastVersion = sceneA.scene_version;
    expect(await racer.pollOnce()).toBe("unchanged");
  });
});
