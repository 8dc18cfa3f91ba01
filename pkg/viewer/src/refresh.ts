/**
 * Version-gated scene refresh.
 *
 * The watcher polls /api/version; only a changed scene_version triggers
 * a refetch of /api/scene (with If-None-Match so an unchanged scene
 * costs a 304). Poll failures keep the last scene and surface a
 * staleness timestamp for the banner. The fetch function is injected
 * so the logic is unit-testable.
 */

import type { SceneDocument, VersionInfo } from "./types";

export type FetchLike = (
  url: string,
  init?: { headers?: Record<string, string> },
) => Promise<{
  ok: boolean;
  status: number;
  headers: { get(name: string): string | null };
  json(): Promise<unknown>;
}>;

export type PollOutcome = "updated" | "unchanged" | "failed";

export interface WatcherEvents {
  onScene(scene: SceneDocument): void;
  onStale?(staleSinceMs: number): void;
  onRecovered?(): void;
}

export class SceneWatcher {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private readonly events: WatcherEvents;
  private timer: ReturnType<typeof setInterval> | null = null;
  lastVersion: string | null = null;
  staleSince: number | null = null;
  sceneFetches = 0;

  constructor(baseUrl: string, events: WatcherEvents, fetchFn: FetchLike = fetch as FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.events = events;
    this.fetchFn = fetchFn;
  }

  async fetchScene(): Promise<SceneDocument | null> {
    const headers: Record<string, string> = {};
    if (this.lastVersion !== null) headers["If-None-Match"] = this.lastVersion;
    this.sceneFetches += 1;
    const resp = await this.fetchFn(`${this.baseUrl}/api/scene`, { headers });
    if (resp.status === 304) return null;
    if (!resp.ok) throw new Error(`scene fetch failed: ${resp.status}`);
    return (await resp.json()) as SceneDocument;
  }

  async fetchVersion(): Promise<VersionInfo> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/version`);
    if (!resp.ok) throw new Error(`version fetch failed: ${resp.status}`);
    return (await resp.json()) as VersionInfo;
  }

  /** Initial load: unconditionally fetch and adopt the scene. */
  async loadInitial(): Promise<SceneDocument> {
    this.lastVersion = null;
    const scene = await this.fetchScene();
    if (scene === null) throw new Error("unexpected 304 on initial fetch");
    this.lastVersion = scene.scene_version;
    this.staleSince = null;
    this.events.onScene(scene);
    return scene;
  }

  /** One poll cycle; refetches the scene only when the version moved. */
  async pollOnce(nowMs: number = Date.now()): Promise<PollOutcome> {
    let version: VersionInfo;
    try {
      version = await this.fetchVersion();
    } catch {
      if (this.staleSince === null) this.staleSince = nowMs;
      this.events.onStale?.(this.staleSince);
      return "failed";
    }
    if (version.scene_version === this.lastVersion) {
      this.recover();
      return "unchanged";
    }
    try {
      const scene = await this.fetchScene();
      if (scene === null) {
        this.recover();
        return "unchanged";
      }
      this.lastVersion = scene.scene_version;
      this.recover();
      this.events.onScene(scene);
      return "updated";
    } catch {
      if (this.staleSince === null) this.staleSince = nowMs;
      this.events.onStale?.(this.staleSince);
      return "failed";
    }
  }

  private recover(): void {
    if (this.staleSince !== null) {
      this.staleSince = null;
      this.events.onRecovered?.();
    }
  }

  start(intervalMs: number): void {
    this.stop();
    this.timer = setInterval(() => void this.pollOnce(), intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
