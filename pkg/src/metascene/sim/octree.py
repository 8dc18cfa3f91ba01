"""Octree over charged node positions for Barnes-Hut force evaluation.

The build is shared by both kernel backends so that, for a given
position array, every backend traverses the exact same flat arrays.
Cells are created lazily in insertion order, which makes the layout a
pure function of the input; aggregates are accumulated child-0-to-7 in
one reverse-creation-order pass (children are always created after
their parent).

Each cell carries its total charge, center of charge and the traceless
quadrupole tensor about the center of charge (the dipole vanishes there
by construction).  The opening criterion compares cell side to the
distance from the center of charge less its offset from the geometric
center, so off-center charge never masquerades as well-separated.

Leaves normally hold one point; points that remain coincident at the
depth cap share a bucket leaf and always interact directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEPTH = 32


@dataclass(frozen=True)
class OctreeArrays:
    center: np.ndarray      # (C, 3) f64 geometric cell centers
    half: np.ndarray        # (C,) f64 half side length
    children: np.ndarray    # (C, 8) int64, -1 where absent
    leaf_start: np.ndarray  # (C,) int64 into members
    leaf_count: np.ndarray  # (C,) int64; 0 for internal cells
    members: np.ndarray     # (P,) int64 original node indices
    cell_charge: np.ndarray  # (C,) f64 aggregate charge
    cell_coq: np.ndarray    # (C, 3) f64 center of charge
    cell_quad: np.ndarray   # (C, 3, 3) f64 traceless quadrupole about coq
    coq_offset: np.ndarray  # (C,) f64 |coq - center|

    @property
    def n_cells(self) -> int:
        return self.half.shape[0]


_EMPTY = OctreeArrays(
    center=np.zeros((0, 3)),
    half=np.zeros(0),
    children=np.full((0, 8), -1, dtype=np.int64),
    leaf_start=np.zeros(0, dtype=np.int64),
    leaf_count=np.zeros(0, dtype=np.int64),
    members=np.zeros(0, dtype=np.int64),
    cell_charge=np.zeros(0),
    cell_coq=np.zeros((0, 3)),
    cell_quad=np.zeros((0, 3, 3)),
    coq_offset=np.zeros(0),
)


def build_octree(positions: np.ndarray, charges: np.ndarray, active: np.ndarray) -> OctreeArrays:
    """Build the tree over ``positions[active]`` weighted by charge."""
    m = int(active.size)
    if m == 0:
        return _EMPTY

    pts = positions[active]
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    cx0, cy0, cz0 = (lo + hi) * 0.5
    half0 = float(max((hi - lo).max() * 0.5, 1e-9)) * (1.0 + 1e-7)

    centers_x = [float(cx0)]
    centers_y = [float(cy0)]
    centers_z = [float(cz0)]
    halves = [half0]
    children: list[list[int]] = [[-1] * 8]
    bucket: list[list[int]] = [[]]
    internal = [False]

    def new_child(parent: int, octant: int) -> int:
        h = halves[parent] * 0.5
        cx = centers_x[parent] + (h if octant & 1 else -h)
        cy = centers_y[parent] + (h if octant & 2 else -h)
        cz = centers_z[parent] + (h if octant & 4 else -h)
        idx = len(halves)
        centers_x.append(cx)
        centers_y.append(cy)
        centers_z.append(cz)
        halves.append(h)
        children.append([-1] * 8)
        bucket.append([])
        internal.append(False)
        children[parent][octant] = idx
        return idx

    def octant_of(cell: int, px: float, py: float, pz: float) -> int:
        return (
            (1 if px >= centers_x[cell] else 0)
            | (2 if py >= centers_y[cell] else 0)
            | (4 if pz >= centers_z[cell] else 0)
        )

    for k in range(m):
        px, py, pz = float(pts[k, 0]), float(pts[k, 1]), float(pts[k, 2])
        cur = 0
        depth = 0
        while True:
            if internal[cur]:
                octant = octant_of(cur, px, py, pz)
                child = children[cur][octant]
                if child == -1:
                    child = new_child(cur, octant)
                cur = child
                depth += 1
                continue
            if not bucket[cur] or depth >= MAX_DEPTH:
                bucket[cur].append(int(active[k]))
                break
            # Occupied leaf: push the resident points one level down and
            # keep descending with the new point.
            residents = bucket[cur]
            bucket[cur] = []
            internal[cur] = True
            for r in residents:
                rx, ry, rz = (
                    float(positions[r, 0]),
                    float(positions[r, 1]),
                    float(positions[r, 2]),
                )
                octant = octant_of(cur, rx, ry, rz)
                child = children[cur][octant]
                if child == -1:
                    child = new_child(cur, octant)
                bucket[child].append(r)

    n_cells = len(halves)
    center = np.column_stack([
        np.array(centers_x), np.array(centers_y), np.array(centers_z)
    ])
    half = np.array(halves)
    child_arr = np.array(children, dtype=np.int64)
    leaf_start = np.zeros(n_cells, dtype=np.int64)
    leaf_count = np.zeros(n_cells, dtype=np.int64)
    members: list[int] = []
    for c in range(n_cells):
        leaf_start[c] = len(members)
        leaf_count[c] = len(bucket[c])
        members.extend(bucket[c])
    members_arr = np.array(members, dtype=np.int64)

    # Aggregates: charge, weighted first moment, raw second moments
    # (6 unique components: xx, yy, zz, xy, xz, yz).
    cell_charge = np.zeros(n_cells)
    first = np.zeros((n_cells, 3))
    sec = np.zeros((n_cells, 6))
    for c in range(n_cells - 1, -1, -1):
        if leaf_count[c] > 0:
            for mi in range(leaf_start[c], leaf_start[c] + leaf_count[c]):
                j = members_arr[mi]
                q = float(charges[j])
                x = float(positions[j, 0])
                y = float(positions[j, 1])
                z = float(positions[j, 2])
                cell_charge[c] += q
                fc = first[c]
                fc[0] += q * x
                fc[1] += q * y
                fc[2] += q * z
                sc = sec[c]
                sc[0] += q * x * x
                sc[1] += q * y * y
                sc[2] += q * z * z
                sc[3] += q * x * y
                sc[4] += q * x * z
                sc[5] += q * y * z
        else:
            for o in range(8):
                ch = child_arr[c, o]
                if ch >= 0:
                    cell_charge[c] += cell_charge[ch]
                    first[c] += first[ch]
                    sec[c] += sec[ch]
    second = np.empty((n_cells, 3, 3))
    second[:, 0, 0] = sec[:, 0]
    second[:, 1, 1] = sec[:, 1]
    second[:, 2, 2] = sec[:, 2]
    second[:, 0, 1] = second[:, 1, 0] = sec[:, 3]
    second[:, 0, 2] = second[:, 2, 0] = sec[:, 4]
    second[:, 1, 2] = second[:, 2, 1] = sec[:, 5]

    nonzero = cell_charge != 0.0
    safe_q = np.where(nonzero, cell_charge, 1.0)
    coq = np.where(nonzero[:, None], first / safe_q[:, None], center)
    central = second - safe_q[:, None, None] * np.einsum("ci,cj->cij", coq, coq)
    central[~nonzero] = 0.0
    trace = np.einsum("cii->c", central)
    quad = 3.0 * central - trace[:, None, None] * np.eye(3)[None, :, :]
    coq_offset = np.linalg.norm(coq - center, axis=1)

    return OctreeArrays(
        center=center,
        half=half,
        children=child_arr,
        leaf_start=leaf_start,
        leaf_count=leaf_count,
        members=members_arr,
        cell_charge=cell_charge,
        cell_coq=coq,
        cell_quad=quad,
        coq_offset=coq_offset,
    )
