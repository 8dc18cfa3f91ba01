/** Viewer bootstrap: renderer, orbit controls, panel, refresh loop. */

import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";

import { Banner } from "./banner";
import { applyVisibility, buildSceneGraph, pickables } from "./render";
import { SceneWatcher } from "./refresh";
import type { SceneDocument } from "./types";
import {
  ALL_LAYERS,
  adoptScene,
  initViewState,
  select,
  toggleFloor,
  toggleLayer,
  type LayerName,
  type ViewState,
} from "./view-state";
import { computeVisibleIds } from "./visibility";

const POLL_INTERVAL_MS = 5000;
const RETRY_BASE_MS = 1000;
const RETRY_MAX_MS = 30_000;

const app = document.getElementById("app")!;
const panel = document.getElementById("panel")!;
const banner = new Banner(document.body);

const renderer = new THREE.WebGLRenderer({ antialias: true });
renderer.setPixelRatio(window.devicePixelRatio);
app.appendChild(renderer.domElement);

const three = new THREE.Scene();
three.background = new THREE.Color(0x10141c);
three.add(new THREE.AmbientLight(0xffffff, 0.7));
const sun = new THREE.DirectionalLight(0xffffff, 1.2);
sun.position.set(60, 120, 40);
three.add(sun);

const camera = new THREE.PerspectiveCamera(55, 1, 0.1, 5000);
const controls = new OrbitControls(camera, renderer.domElement);
controls.enableDamping = true;

let scene: SceneDocument | null = null;
let state: ViewState | null = null;
let graph: THREE.Group | null = null;

function resize(): void {
  const w = app.clientWidth || window.innerWidth;
  const h = app.clientHeight || window.innerHeight;
  renderer.setSize(w, h);
  camera.aspect = w / h;
  camera.updateProjectionMatrix();
}
window.addEventListener("resize", resize);

function refreshVisibility(): void {
  if (scene && state && graph) applyVisibility(graph, computeVisibleIds(scene, state));
  renderPanel();
}

function setState(next: ViewState): void {
  state = next;
  refreshVisibility();
}

function showScene(doc: SceneDocument): void {
  const previous = scene;
  scene = doc;
  if (graph) three.remove(graph);
  graph = buildSceneGraph(doc);
  three.add(graph);
  if (state && previous) {
    // preserve camera and toggles across refreshes
    state = adoptScene(state, previous, doc);
  } else {
    state = initViewState(doc);
    const [tx, ty, tz] = state.camera.target;
    controls.target.set(tx, ty, tz);
    camera.position.set(
      tx + state.camera.distance * Math.cos(state.camera.azimuth),
      ty + state.camera.distance * Math.sin(state.camera.elevation),
      tz + state.camera.distance * Math.sin(state.camera.azimuth),
    );
  }
  refreshVisibility();
}

function renderPanel(): void {
  if (!scene || !state) {
    panel.innerHTML = scene === null ? "<p>no data</p>" : "";
    return;
  }
  const floors = [...new Set(scene.floors.map((f) => f.level_index))].sort((a, b) => a - b);
  const floorRows = floors
    .map((level) => {
      const checked = state!.visibleFloors.has(level) ? "checked" : "";
      return `<label><input type="checkbox" data-floor="${level}" ${checked}> floor ${level}</label>`;
    })
    .join("");
  const layerRows = ALL_LAYERS.map((layer) => {
    const checked = state!.layers[layer] ? "checked" : "";
    return `<label><input type="checkbox" data-layer="${layer}" ${checked}> ${layer}</label>`;
  }).join("");
  const selected = state.selected
    ? `<div class="sel">selected: <b>${state.selected}</b></div>`
    : "";
  panel.innerHTML = `
    <h1>${scene.building_id}</h1>
    <div class="version">scene ${state.sceneVersion}</div>
    <h2>floors</h2><div class="group">${floorRows}</div>
    <h2>layers</h2><div class="group">${layerRows}</div>
    ${selected}
  `;
  panel.querySelectorAll<HTMLInputElement>("input[data-floor]").forEach((box) => {
    box.addEventListener("change", () => {
      if (scene && state) setState(toggleFloor(scene, state, Number(box.dataset.floor)));
    });
  });
  panel.querySelectorAll<HTMLInputElement>("input[data-layer]").forEach((box) => {
    box.addEventListener("change", () => {
      if (scene && state) setState(toggleLayer(scene, state, box.dataset.layer as LayerName));
    });
  });
}

const raycaster = new THREE.Raycaster();
renderer.domElement.addEventListener("click", (event) => {
  if (!scene || !state || !graph) return;
  const rect = renderer.domElement.getBoundingClientRect();
  const ndc = new THREE.Vector2(
    ((event.clientX - rect.left) / rect.width) * 2 - 1,
    -((event.clientY - rect.top) / rect.height) * 2 + 1,
  );
  raycaster.setFromCamera(ndc, camera);
  const hit = raycaster.intersectObjects(pickables(graph), false)[0];
  const id = hit ? (hit.object.userData.id as string) : null;
  setState(select(scene, state, id));
});

const watcher = new SceneWatcher(window.location.origin, {
  onScene: showScene,
  onStale: (since) => banner.showStaleSince(since),
  onRecovered: () => banner.hide(),
});

async function boot(attempt = 0): Promise<void> {
  try {
    await watcher.loadInitial();
    banner.hide();
    watcher.start(POLL_INTERVAL_MS);
  } catch (err) {
    banner.showError(`failed to load scene: ${String(err)} - retrying`);
    const backoff = Math.min(RETRY_BASE_MS * 2 ** attempt, RETRY_MAX_MS);
    setTimeout(() => void boot(attempt + 1), backoff);
  }
}

function animate(): void {
  requestAnimationFrame(animate);
  controls.update();
  renderer.render(three, camera);
}

resize();
renderPanel();
animate();
void boot();
