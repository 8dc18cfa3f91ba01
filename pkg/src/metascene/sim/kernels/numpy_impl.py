"""Pure-numpy force kernels: the fallback backend.

Semantics match the numba backend; per-node force sums can differ from
it in the last few ulps because vectorized reductions associate
differently.  Each backend on its own is fully deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from ...rng import pair_angle
from ..octree import OctreeArrays

BACKEND = "numpy"


def spring_forces(acc, pos, link_from, link_to, rest, stiff, seed):
    """Linear springs: F = k * (|d| - rest) * d_hat on 'from', -F on 'to'."""
    if link_from.size == 0:
        return
    seed = int(seed)
    d = pos[link_to] - pos[link_from]
    r = np.sqrt((d * d).sum(axis=1))
    zero = r <= 0.0
    if zero.any():
        d = d.copy()
        for li in np.nonzero(zero)[0]:
            ang = pair_angle(seed, int(link_from[li]), int(link_to[li]))
            d[li, 0] = math.cos(ang)
            d[li, 1] = 0.0
            d[li, 2] = math.sin(ang)
            r[li] = 1.0
    f = (stiff * (np.where(zero, 0.0, r) - rest) / r)[:, None] * d
    np.add.at(acc, link_from, f)
    np.add.at(acc, link_to, -f)


def charge_forces_exact(acc, pos, charge, targets, k_c, r_min, seed):
    """Exact pairwise charge forces over the target index set.

    F_ij = k_c * q_i * q_j / max(r^2, r_min^2) * r_hat, with r_hat
    pointing from j to i; like-sign products repel.
    """
    seed = int(seed)
    m = targets.size
    if m < 2:
        return
    p = pos[targets]
    q = charge[targets]
    d = p[:, None, :] - p[None, :, :]          # (m, m, 3), row i minus row j
    r2 = (d * d).sum(axis=2)
    zero = r2 <= 0.0                           # diagonal plus coincident pairs
    r2s = np.where(zero, 1.0, r2)
    r = np.sqrt(r2s)
    f = k_c * (q[:, None] * q[None, :]) / np.maximum(r2s, r_min * r_min) / r
    f = np.where(zero, 0.0, f)
    acc[targets] += (f[:, :, None] * d).sum(axis=1)
    for i, j in np.argwhere(np.triu(zero, k=1)):
        gi, gj = int(targets[i]), int(targets[j])
        ang = pair_angle(seed, gi, gj)
        mag = k_c * float(charge[gi] * charge[gj]) / (r_min * r_min)
        ux, uz = math.cos(ang), math.sin(ang)
        acc[gi, 0] += mag * ux
        acc[gi, 2] += mag * uz
        acc[gj, 0] -= mag * ux
        acc[gj, 2] -= mag * uz


def charge_forces_bh(acc, pos, charge, targets, theta, k_c, r_min, seed, tree: OctreeArrays):
    """Barnes-Hut approximation with quadrupole correction.

    A cell stands in for its members when theta * (distance to its
    center of charge, less the center's offset from the geometric
    center) exceeds the cell side; accepted cells contribute their
    monopole plus traceless quadrupole."""
    seed = int(seed)
    if targets.size == 0 or tree.n_cells == 0:
        return
    r_min2 = r_min * r_min
    children = tree.children
    leaf_count = tree.leaf_count
    leaf_start = tree.leaf_start
    members = tree.members
    coq = tree.cell_coq
    cell_q = tree.cell_charge
    quad = tree.cell_quad
    offset = tree.coq_offset
    half = tree.half

    stack: list[tuple[int, np.ndarray]] = [(0, targets)]
    while stack:
        c, idx = stack.pop()
        if leaf_count[c] > 0:
            for mi in range(leaf_start[c], leaf_start[c] + leaf_count[c]):
                j = int(members[mi])
                sel = idx[idx != j]
                if sel.size == 0:
                    continue
                d = pos[sel] - pos[j]
                r2 = (d * d).sum(axis=1)
                zero = r2 <= 0.0
                f = k_c * charge[sel] * charge[j] / np.maximum(r2, r_min2)
                r = np.sqrt(np.where(zero, 1.0, r2))
                contrib = (np.where(zero, 0.0, f) / r)[:, None] * d
                acc[sel] += contrib
                for t in sel[zero]:
                    ti = int(t)
                    ang = pair_angle(seed, ti, j)
                    mag = k_c * float(charge[ti] * charge[j]) / r_min2
                    sign = 1.0 if ti < j else -1.0
                    acc[ti, 0] += sign * mag * math.cos(ang)
                    acc[ti, 2] += sign * mag * math.sin(ang)
        else:
            d = pos[idx] - coq[c]
            r2 = (d * d).sum(axis=1)
            dist = np.sqrt(r2)
            far = (dist > 0.0) & (theta * (dist - offset[c]) > 2.0 * half[c])
            if cell_q[c] == 0.0:
                far[:] = False
            fidx = idx[far]
            if fidx.size:
                df = d[far]
                distf = dist[far]
                f = k_c * charge[fidx] * cell_q[c] / np.maximum(r2[far], r_min2)
                force = (f / distf)[:, None] * df
                qd = df @ quad[c]
                dqd = (df * qd).sum(axis=1)
                d5 = distf ** 5
                d7 = d5 * distf * distf
                force += (k_c * charge[fidx])[:, None] * (
                    2.5 * (dqd / d7)[:, None] * df - qd / d5[:, None]
                )
                acc[fidx] += force
            near = idx[~far]
            if near.size:
                for o in range(7, -1, -1):
                    ch = children[c, o]
                    if ch >= 0:
                        stack.append((int(ch), near))


def grouping_forces(acc, pos, pair_i, pair_j, k):
    """Weak cohesion between same-room devices: F = k * d toward peer."""
    if pair_i.size == 0:
        return
    d = pos[pair_j] - pos[pair_i]
    f = k * d
    np.add.at(acc, pair_i, f)
    np.add.at(acc, pair_j, -f)


def room_repulsion_forces(acc, pos, pair_i, pair_j, k, seed):
    """Horizontal 1/r repulsion between same-floor room nodes."""
    seed = int(seed)
    if pair_i.size == 0:
        return
    dx = pos[pair_i, 0] - pos[pair_j, 0]
    dz = pos[pair_i, 2] - pos[pair_j, 2]
    r = np.sqrt(dx * dx + dz * dz)
    zero = r <= 0.0
    if zero.any():
        dx = dx.copy()
        dz = dz.copy()
        for p in np.nonzero(zero)[0]:
            ang = pair_angle(seed, int(pair_i[p]), int(pair_j[p]))
            dx[p] = math.cos(ang)
            dz[p] = math.sin(ang)
            r[p] = 1.0
    f = k / np.maximum(np.where(zero, 0.0, r), 0.5)
    fx = f * dx / r
    fz = f * dz / r
    np.add.at(acc[:, 0], pair_i, fx)
    np.add.at(acc[:, 2], pair_i, fz)
    np.add.at(acc[:, 0], pair_j, -fx)
    np.add.at(acc[:, 2], pair_j, -fz)


def floor_repulsion_forces(acc, pos, level, k):
    """Vertical 1/|dy| repulsion between nodes on different floors."""
    n = level.size
    for i in range(n):
        for j in range(i + 1, n):
            if level[i] == level[j]:
                continue
            dy = pos[i, 1] - pos[j, 1]
            if dy == 0.0:
                sign = 1.0 if level[i] > level[j] else -1.0
            else:
                sign = 1.0 if dy > 0.0 else -1.0
            f = k / max(abs(dy), 0.5)
            acc[i, 1] += sign * f
            acc[j, 1] -= sign * f


def anchor_forces(acc, pos, anchor_idx, anchor_pos, k):
    """Zero-rest springs pulling soft-anchored nodes to their pins."""
    if anchor_idx.size == 0:
        return
    d = anchor_pos - pos[anchor_idx]
    np.add.at(acc, anchor_idx, k * d)


def collision_pass(pos, pair_i, pair_j, radius, mass, movable, seed):
    """One Gauss-Seidel pass of horizontal positional correction."""
    seed = int(seed)
    for p in range(pair_i.size):
        i = int(pair_i[p])
        j = int(pair_j[p])
        dx = pos[i, 0] - pos[j, 0]
        dy = pos[i, 1] - pos[j, 1]
        dz = pos[i, 2] - pos[j, 2]
        rsum = radius[i] + radius[j]
        r2 = dx * dx + dy * dy + dz * dz
        if r2 >= rsum * rsum:
            continue
        overlap = rsum - math.sqrt(r2)
        rh = math.sqrt(dx * dx + dz * dz)
        if rh <= 0.0:
            ang = pair_angle(seed, i, j)
            ux, uz = math.cos(ang), math.sin(ang)
        else:
            ux, uz = dx / rh, dz / rh
        mi, mj = movable[i], movable[j]
        if not mi and not mj:
            continue
        if mi and mj:
            wi = mass[j] / (mass[i] + mass[j])
            wj = 1.0 - wi
        elif mi:
            wi, wj = 1.0, 0.0
        else:
            wi, wj = 0.0, 1.0
        pos[i, 0] += overlap * wi * ux
        pos[i, 2] += overlap * wi * uz
        pos[j, 0] -= overlap * wj * ux
        pos[j, 2] -= overlap * wj * uz


def collision_residual(pos, pair_i, pair_j, radius):
    """Largest remaining overlap among the candidate pairs."""
    if pair_i.size == 0:
        return 0.0
    d = pos[pair_i] - pos[pair_j]
    r = np.sqrt((d * d).sum(axis=1))
    overlap = (radius[pair_i] + radius[pair_j]) - r
    worst = overlap.max()
    return float(worst) if worst > 0.0 else 0.0
