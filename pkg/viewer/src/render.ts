/**
 * three.js scene construction. Every renderable gets the visibility id
 * from visibility.ts as its Object3D name; geometry and colors are
 * taken verbatim from the scene document, never recomputed.
 */

import * as THREE from "three";

import { colorToHex } from "./colors";
import type { Aabb, SceneDocument } from "./types";

const ROOM_OPACITY = 0.25;
const DEVICE_RADIUS: Record<string, number> = { sensor: 0.25, gateway: 0.4 };
const DEVICE_COLOR: Record<string, number> = { sensor: 0x2673e6, gateway: 0xf28c19 };

function boxCenter(box: Aabb): THREE.Vector3 {
  return new THREE.Vector3(
    (box.min[0] + box.max[0]) / 2,
    (box.min[1] + box.max[1]) / 2,
    (box.min[2] + box.max[2]) / 2,
  );
}

function boxSize(box: Aabb): THREE.Vector3 {
  return new THREE.Vector3(
    Math.max(box.max[0] - box.min[0], 1e-3),
    Math.max(box.max[1] - box.min[1], 1e-3),
    Math.max(box.max[2] - box.min[2], 1e-3),
  );
}

function makeLabelSprite(text: string): THREE.Sprite {
  const canvas = document.createElement("canvas");
  const ctx = canvas.getContext("2d")!;
  const pad = 8;
  ctx.font = "28px sans-serif";
  canvas.width = Math.ceil(ctx.measureText(text).width) + pad * 2;
  canvas.height = 40;
  ctx.font = "28px sans-serif";
  ctx.fillStyle = "rgba(16, 20, 28, 0.75)";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#f0f4ff";
  ctx.textBaseline = "middle";
  ctx.fillText(text, pad, canvas.height / 2);
  const texture = new THREE.CanvasTexture(canvas);
  texture.colorSpace = THREE.SRGBColorSpace;
  const sprite = new THREE.Sprite(new THREE.SpriteMaterial({ map: texture, depthTest: false }));
  sprite.scale.set(canvas.width / 14, canvas.height / 14, 1);
  return sprite;
}

/** Build the full renderable hierarchy for one scene document. */
export function buildSceneGraph(scene: SceneDocument): THREE.Group {
  const root = new THREE.Group();
  root.name = "metascene";

  const cube = new THREE.BoxGeometry(1, 1, 1);
  const sphere = new THREE.SphereGeometry(1, 16, 12);

  for (const room of scene.rooms) {
    const material = new THREE.MeshLambertMaterial({
      color: 0x4d88e8,
      transparent: true,
      opacity: ROOM_OPACITY,
      depthWrite: false,
    });
    const mesh = new THREE.Mesh(cube, material);
    mesh.name = `room/${room.room_id}`;
    mesh.position.copy(boxCenter(room.box));
    mesh.scale.copy(boxSize(room.box));
    mesh.userData = { kind: "room", id: room.room_id, label: room.label };
    root.add(mesh);

    const label = makeLabelSprite(room.label);
    label.name = `label/${room.room_id}`;
    const top = boxCenter(room.box);
    top.y = room.box.max[1] + 0.8;
    label.position.copy(top);
    root.add(label);
  }

  for (const node of scene.nodes) {
    if (node.kind === "room") continue;
    const mesh = new THREE.Mesh(
      sphere,
      new THREE.MeshLambertMaterial({ color: DEVICE_COLOR[node.kind] ?? 0x999999 }),
    );
    const r = DEVICE_RADIUS[node.kind] ?? 0.2;
    mesh.name = `device/${node.node_id}`;
    mesh.position.set(node.position[0], node.position[1], node.position[2]);
    mesh.scale.set(r, r, r);
    mesh.userData = { kind: node.kind, id: node.node_id, room: node.room_id };
    root.add(mesh);
  }

  const positionOf = new Map(scene.nodes.map((n) => [n.node_id, n.position]));
  for (const link of scene.links) {
    const a = positionOf.get(link.from);
    const b = positionOf.get(link.to);
    if (!a || !b) continue;
    const geometry = new THREE.BufferGeometry().setFromPoints([
      new THREE.Vector3(...a),
      new THREE.Vector3(...b),
    ]);
    // Color passes through from the document untouched.
    const material = new THREE.LineBasicMaterial({ color: colorToHex(link.color_rgb) });
    const line = new THREE.Line(geometry, material);
    line.name = `link/${link.link_id}`;
    line.userData = { kind: "link", id: link.link_id, rssi: link.rssi_dbm };
    root.add(line);
  }

  for (const floor of scene.floors) {
    const mesh = new THREE.Mesh(
      cube,
      new THREE.MeshLambertMaterial({
        color: 0x8a8f99,
        transparent: true,
        opacity: 0.35,
        depthWrite: false,
      }),
    );
    mesh.name = `floor/${floor.level_index}`;
    mesh.position.copy(boxCenter(floor.extent));
    mesh.scale.copy(boxSize(floor.extent));
    root.add(mesh);
  }

  if (scene.envelope !== null) {
    const size = boxSize(scene.envelope);
    const geometry = new THREE.BoxGeometry(size.x, size.y, size.z);
    const wire = new THREE.LineSegments(
      new THREE.EdgesGeometry(geometry),
      new THREE.LineBasicMaterial({ color: 0x3a3f4a }),
    );
    wire.name = "envelope";
    wire.position.copy(boxCenter(scene.envelope));
    root.add(wire);
  }

  return root;
}

/** Apply a visibility set to the named objects in the graph. */
export function applyVisibility(root: THREE.Group, visible: ReadonlySet<string>): void {
  for (const child of root.children) {
    if (child.name) child.visible = visible.has(child.name);
  }
}

/** Pickable meshes for selection raycasts (rooms and devices). */
export function pickables(root: THREE.Group): THREE.Object3D[] {
  return root.children.filter(
    (c) => c.visible && (c.name.startsWith("room/") || c.name.startsWith("device/")),
  );
}
