/** Scene document types, mirroring the server's scene JSON schema. */

export type Vec3 = [number, number, number];
export type ColorRGB = [number, number, number];

export type NodeKind = "room" | "sensor" | "gateway";
export type LinkKind = "signal" | "sensor_room" | "gateway_room" | "adjacency";

export interface Aabb {
  min: Vec3;
  max: Vec3;
}

export interface SceneNode {
  node_id: string;
  kind: NodeKind;
  room_id: string;
  level_index: number;
  position: Vec3;
}

export interface SceneLink {
  link_id: string;
  from: string;
  to: string;
  rssi_dbm: number | null;
  color_rgb: ColorRGB;
  kind: LinkKind;
}

export interface SceneRoom {
  room_id: string;
  box: Aabb;
  label: string;
  level_index: number;
}

export interface SceneFloor {
  level_index: number;
  plane_y: number;
  extent: Aabb;
}

export interface SceneDocument {
  scene_version: string;
  building_id: string;
  nodes: SceneNode[];
  links: SceneLink[];
  rooms: SceneRoom[];
  floors: SceneFloor[];
  envelope: Aabb | null;
  warnings: string[];
}

export interface VersionInfo {
  scene_version: string;
  tick_count: number;
  last_poll: number;
}
