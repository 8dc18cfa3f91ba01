"""glTF 2.0 export: rooms and slabs as boxes, devices as icospheres,
links as vertex-colored line primitives, envelope as a wireframe.

Single-file asset with one embedded (base64 data URI) buffer.  Node
naming: room/<id>, floor/<level>, device/<id>, link/<id>,
envelope/<building_id>.
"""

from __future__ import annotations

import base64
import json
import math

import numpy as np

from .document import SceneDocument

_COMPONENT_F32 = 5126
_COMPONENT_U16 = 5123
_MODE_LINES = 1
_MODE_TRIANGLES = 4
_TARGET_ARRAY = 34962
_TARGET_ELEMENT = 34963

ROOM_GLYPH_RADIUS_M = 0.15  # room particles have radius 0; keep them visible

_MATERIALS = [
    ("room", [0.30, 0.52, 0.92, 0.25], "BLEND"),
    ("slab", [0.55, 0.55, 0.58, 0.35], "BLEND"),
    ("sensor", [0.15, 0.45, 0.90, 1.0], "OPAQUE"),
    ("gateway", [0.95, 0.55, 0.10, 1.0], "OPAQUE"),
    ("roomnode", [0.60, 0.60, 0.60, 1.0], "OPAQUE"),
    ("line", [1.0, 1.0, 1.0, 1.0], "OPAQUE"),
    ("wire", [0.25, 0.25, 0.25, 1.0], "OPAQUE"),
]
_MATERIAL_INDEX = {name: i for i, (name, _, _) in enumerate(_MATERIALS)}


def _unit_cube() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit cube centered at the origin: verts, triangle indices, line indices."""
    verts = np.array(
        [
            [x, y, z]
            for x in (-0.5, 0.5)
            for y in (-0.5, 0.5)
            for z in (-0.5, 0.5)
        ],
        dtype=np.float32,
    )
    # Vertex index bit layout: x*4 + y*2 + z
    tris = np.array(
        [
            0, 1, 3, 0, 3, 2,   # x = -0.5 face
            4, 6, 7, 4, 7, 5,   # x = +0.5
            0, 4, 5, 0, 5, 1,   # y = -0.5
            2, 3, 7, 2, 7, 6,   # y = +0.5
            0, 2, 6, 0, 6, 4,   # z = -0.5
            1, 5, 7, 1, 7, 3,   # z = +0.5
        ],
        dtype=np.uint16,
    )
    lines = np.array(
        [
            0, 1, 1, 3, 3, 2, 2, 0,
            4, 5, 5, 7, 7, 6, 6, 4,
            0, 4, 1, 5, 2, 6, 3, 7,
        ],
        dtype=np.uint16,
    )
    return verts, tris, lines


def _icosphere(subdivisions: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Unit icosphere: icosahedron subdivided with midpoints renormalized."""
    t = (1.0 + math.sqrt(5.0)) / 2.0
    raw = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    verts = [tuple(c / math.sqrt(1 + t * t) for c in v) for v in raw]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            if key in midpoint:
                return midpoint[key]
            va, vb = verts[a], verts[b]
            mx = tuple((p + q) * 0.5 for p, q in zip(va, vb))
            norm = math.sqrt(sum(c * c for c in mx))
            verts.append(tuple(c / norm for c in mx))
            midpoint[key] = len(verts) - 1
            return midpoint[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return (
        np.array(verts, dtype=np.float32),
        np.array(faces, dtype=np.uint16).reshape(-1),
    )


class _BufferBuilder:
    def __init__(self):
        self.blob = bytearray()
        self.views: list[dict] = []
        self.accessors: list[dict] = []

    def add_view(self, data: bytes, target: int | None) -> int:
        while len(self.blob) % 4:
            self.blob.append(0)
        view = {"buffer": 0, "byteOffset": len(self.blob), "byteLength": len(data)}
        if target is not None:
            view["target"] = target
        self.blob.extend(data)
        self.views.append(view)
        return len(self.views) - 1

    def add_vec3_accessor(self, view: int, array: np.ndarray, byte_offset: int = 0) -> int:
        array = array.reshape(-1, 3)
        self.accessors.append({
            "bufferView": view,
            "byteOffset": byte_offset,
            "componentType": _COMPONENT_F32,
            "count": int(array.shape[0]),
            "type": "VEC3",
            "min": [float(v) for v in array.min(axis=0)],
            "max": [float(v) for v in array.max(axis=0)],
        })
        return len(self.accessors) - 1

    def add_index_accessor(self, view: int, array: np.ndarray) -> int:
        self.accessors.append({
            "bufferView": view,
            "byteOffset": 0,
            "componentType": _COMPONENT_U16,
            "count": int(array.size),
            "type": "SCALAR",
        })
        return len(self.accessors) - 1


def to_gltf(scene: SceneDocument) -> bytes:
    """Serialize the scene as a structurally valid glTF 2.0 asset."""
    buf = _BufferBuilder()
    meshes: list[dict] = []
    nodes: list[dict] = []

    cube_verts, cube_tris, cube_lines = _unit_cube()
    sphere_verts, sphere_tris = _icosphere(1)

    cube_pos_view = buf.add_view(cube_verts.astype("<f4").tobytes(), _TARGET_ARRAY)
    cube_pos_acc = buf.add_vec3_accessor(cube_pos_view, cube_verts)
    cube_idx_acc = buf.add_index_accessor(
        buf.add_view(cube_tris.astype("<u2").tobytes(), _TARGET_ELEMENT), cube_tris)
    cube_line_acc = buf.add_index_accessor(
        buf.add_view(cube_lines.astype("<u2").tobytes(), _TARGET_ELEMENT), cube_lines)
    sphere_pos_view = buf.add_view(sphere_verts.astype("<f4").tobytes(), _TARGET_ARRAY)
    sphere_pos_acc = buf.add_vec3_accessor(sphere_pos_view, sphere_verts)
    sphere_idx_acc = buf.add_index_accessor(
        buf.add_view(sphere_tris.astype("<u2").tobytes(), _TARGET_ELEMENT), sphere_tris)

    def box_mesh(material: str) -> int:
        meshes.append({
            "name": f"box:{material}",
            "primitives": [{
                "attributes": {"POSITION": cube_pos_acc},
                "indices": cube_idx_acc,
                "mode": _MODE_TRIANGLES,
                "material": _MATERIAL_INDEX[material],
            }],
        })
        return len(meshes) - 1

    def sphere_mesh(material: str) -> int:
        meshes.append({
            "name": f"sphere:{material}",
            "primitives": [{
                "attributes": {"POSITION": sphere_pos_acc},
                "indices": sphere_idx_acc,
                "mode": _MODE_TRIANGLES,
                "material": _MATERIAL_INDEX[material],
            }],
        })
        return len(meshes) - 1

    mesh_cache: dict[str, int] = {}

    def shared_mesh(kind: str) -> int:
        if kind not in mesh_cache:
            if kind in ("room", "slab"):
                mesh_cache[kind] = box_mesh(kind)
            elif kind == "wire":
                meshes.append({
                    "name": "box:wire",
                    "primitives": [{
                        "attributes": {"POSITION": cube_pos_acc},
                        "indices": cube_line_acc,
                        "mode": _MODE_LINES,
                        "material": _MATERIAL_INDEX["wire"],
                    }],
                })
                mesh_cache[kind] = len(meshes) - 1
            else:
                mesh_cache[kind] = sphere_mesh(kind)
        return mesh_cache[kind]

    for rb in scene.rooms:
        size = [max(s, 1e-3) for s in rb.box.size()]
        nodes.append({
            "name": f"room/{rb.room_id}",
            "mesh": shared_mesh("room"),
            "translation": [float(c) for c in rb.box.center()],
            "scale": [float(s) for s in size],
        })

    for fs in scene.floors:
        size = [max(s, 1e-3) for s in fs.extent.size()]
        nodes.append({
            "name": f"floor/{fs.level_index}",
            "mesh": shared_mesh("slab"),
            "translation": [float(c) for c in fs.extent.center()],
            "scale": [float(s) for s in size],
        })

    if scene.envelope is not None:
        size = [max(s, 1e-3) for s in scene.envelope.size()]
        nodes.append({
            "name": f"envelope/{scene.building_id}",
            "mesh": shared_mesh("wire"),
            "translation": [float(c) for c in scene.envelope.center()],
            "scale": [float(s) for s in size],
        })

    kind_to_material = {"sensor": "sensor", "gateway": "gateway", "room": "roomnode"}
    kind_to_radius = {"sensor": 0.25, "gateway": 0.4, "room": ROOM_GLYPH_RADIUS_M}
    for n in scene.nodes:
        r = kind_to_radius[n.kind]
        nodes.append({
            "name": f"device/{n.node_id}",
            "mesh": shared_mesh(kind_to_material[n.kind]),
            "translation": [float(c) for c in n.position],
            "scale": [r, r, r],
        })

    if scene.links:
        pos_by_id = {n.node_id: n.position for n in scene.nodes}
        seg_pos = np.zeros((2 * len(scene.links), 3), dtype=np.float32)
        seg_col = np.zeros((2 * len(scene.links), 3), dtype=np.float32)
        for li, lk in enumerate(scene.links):
            seg_pos[2 * li] = pos_by_id[lk.from_id]
            seg_pos[2 * li + 1] = pos_by_id[lk.to_id]
            color = [c / 255.0 for c in lk.color_rgb]
            seg_col[2 * li] = color
            seg_col[2 * li + 1] = color
        pos_view = buf.add_view(seg_pos.astype("<f4").tobytes(), _TARGET_ARRAY)
        col_view = buf.add_view(seg_col.astype("<f4").tobytes(), _TARGET_ARRAY)
        for li, lk in enumerate(scene.links):
            pair = seg_pos[2 * li:2 * li + 2]
            p_acc = buf.add_vec3_accessor(pos_view, pair, byte_offset=24 * li)
            c_acc = buf.add_vec3_accessor(col_view, seg_col[2 * li:2 * li + 2], byte_offset=24 * li)
            meshes.append({
                "name": f"line:{lk.link_id}",
                "primitives": [{
                    "attributes": {"POSITION": p_acc, "COLOR_0": c_acc},
                    "mode": _MODE_LINES,
                    "material": _MATERIAL_INDEX["line"],
                }],
            })
            nodes.append({"name": f"link/{lk.link_id}", "mesh": len(meshes) - 1})

    materials = [
        {
            "name": name,
            "pbrMetallicRoughness": {
                "baseColorFactor": color,
                "metallicFactor": 0.0,
                "roughnessFactor": 0.9,
            },
            "alphaMode": alpha,
            "doubleSided": True,
        }
        for name, color, alpha in _MATERIALS
    ]

    gltf = {
        "asset": {"version": "2.0", "generator": "metascene"},
        "scene": 0,
        "scenes": [{"name": scene.building_id, "nodes": list(range(len(nodes)))}],
        "nodes": nodes,
        "meshes": meshes,
        "materials": materials,
        "accessors": buf.accessors,
        "bufferViews": buf.views,
        "buffers": [{
            "byteLength": len(buf.blob),
            "uri": "data:application/octet-stream;base64,"
                   + base64.b64encode(bytes(buf.blob)).decode("ascii"),
        }],
    }
    if not nodes:
        gltf["scenes"] = [{"name": scene.building_id, "nodes": []}]
    return json.dumps(gltf, separators=(",", ":"), allow_nan=False).encode("utf-8")
