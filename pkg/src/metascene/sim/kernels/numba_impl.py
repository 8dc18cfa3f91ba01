"""Numba-jitted force kernels: the default backend for hot loops.

Each kernel mirrors numpy_impl semantics.  All state mutation happens
through the passed accumulator/position arrays; accumulation is strictly
sequential in (node index, link index) order so results are
bit-reproducible across runs regardless of thread count.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

BACKEND = "numba"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 2.0 ** -53
_STACK_CAP = 4096


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _pair_angle(seed, i, j):
    # seed arrives as uint64; callers mask it at the engine boundary.
    a, b = (i, j) if i <= j else (j, i)
    z = seed + _GOLDEN * np.uint64(a + 1) + _MIX1 * np.uint64(b + 1)
    h = _mix64(z)
    return float(h >> np.uint64(11)) * _INV_2_53 * 2.0 * math.pi


@njit(cache=True)
def spring_forces(acc, pos, link_from, link_to, rest, stiff, seed):
    for l in range(link_from.shape[0]):
        i = link_from[l]
        j = link_to[l]
        dx = pos[j, 0] - pos[i, 0]
        dy = pos[j, 1] - pos[i, 1]
        dz = pos[j, 2] - pos[i, 2]
        r2 = dx * dx + dy * dy + dz * dz
        if r2 <= 0.0:
            ang = _pair_angle(seed, i, j)
            dx = math.cos(ang)
            dy = 0.0
            dz = math.sin(ang)
            r = 1.0
            mag = stiff[l] * (0.0 - rest[l])
        else:
            r = math.sqrt(r2)
            mag = stiff[l] * (r - rest[l])
        fx = mag * dx / r
        fy = mag * dy / r
        fz = mag * dz / r
        acc[i, 0] += fx
        acc[i, 1] += fy
        acc[i, 2] += fz
        acc[j, 0] -= fx
        acc[j, 1] -= fy
        acc[j, 2] -= fz


@njit(cache=True)
def charge_forces_exact(acc, pos, charge, targets, k_c, r_min, seed):
    m = targets.shape[0]
    r_min2 = r_min * r_min
    for a in range(m):
        i = targets[a]
        for b in range(a + 1, m):
            j = targets[b]
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            dz = pos[i, 2] - pos[j, 2]
            r2 = dx * dx + dy * dy + dz * dz
            if r2 <= 0.0:
                ang = _pair_angle(seed, i, j)
                mag = k_c * charge[i] * charge[j] / r_min2
                fx = mag * math.cos(ang)
                fy = 0.0
                fz = mag * math.sin(ang)
            else:
                r = math.sqrt(r2)
                f = k_c * charge[i] * charge[j] / max(r2, r_min2)
                fx = f * dx / r
                fy = f * dy / r
                fz = f * dz / r
            acc[i, 0] += fx
            acc[i, 1] += fy
            acc[i, 2] += fz
            acc[j, 0] -= fx
            acc[j, 1] -= fy
            acc[j, 2] -= fz


@njit(cache=True)
def _bh_one_target(
    t, pos, charge, theta, k_c, r_min2, seed,
    children, leaf_start, leaf_count, members, cell_q, coq, quad, offset, half, stack,
):
    px = pos[t, 0]
    py = pos[t, 1]
    pz = pos[t, 2]
    qt = charge[t]
    fx = 0.0
    fy = 0.0
    fz = 0.0
    stack[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        c = stack[sp]
        if leaf_count[c] > 0:
            for mi in range(leaf_start[c], leaf_start[c] + leaf_count[c]):
                j = members[mi]
                if j == t:
                    continue
                dx = px - pos[j, 0]
                dy = py - pos[j, 1]
                dz = pz - pos[j, 2]
                r2 = dx * dx + dy * dy + dz * dz
                if r2 <= 0.0:
                    ang = _pair_angle(seed, t, j)
                    mag = k_c * qt * charge[j] / r_min2
                    sign = 1.0 if t < j else -1.0
                    fx += sign * mag * math.cos(ang)
                    fz += sign * mag * math.sin(ang)
                else:
                    r = math.sqrt(r2)
                    f = k_c * qt * charge[j] / max(r2, r_min2)
                    fx += f * dx / r
                    fy += f * dy / r
                    fz += f * dz / r
        else:
            dx = px - coq[c, 0]
            dy = py - coq[c, 1]
            dz = pz - coq[c, 2]
            r2 = dx * dx + dy * dy + dz * dz
            dist = math.sqrt(r2)
            if (
                dist > 0.0
                and cell_q[c] != 0.0
                and theta * (dist - offset[c]) > 2.0 * half[c]
            ):
                f = k_c * qt * cell_q[c] / max(r2, r_min2)
                fx += f * dx / dist
                fy += f * dy / dist
                fz += f * dz / dist
                # Quadrupole correction about the center of charge.
                qdx = quad[c, 0, 0] * dx + quad[c, 0, 1] * dy + quad[c, 0, 2] * dz
                qdy = quad[c, 1, 0] * dx + quad[c, 1, 1] * dy + quad[c, 1, 2] * dz
                qdz = quad[c, 2, 0] * dx + quad[c, 2, 1] * dy + quad[c, 2, 2] * dz
                dqd = dx * qdx + dy * qdy + dz * qdz
                d5 = dist * dist * dist * dist * dist
                d7 = d5 * dist * dist
                fx += k_c * qt * (2.5 * dqd * dx / d7 - qdx / d5)
                fy += k_c * qt * (2.5 * dqd * dy / d7 - qdy / d5)
                fz += k_c * qt * (2.5 * dqd * dz / d7 - qdz / d5)
            else:
                for o in range(7, -1, -1):
                    ch = children[c, o]
                    if ch >= 0:
                        stack[sp] = ch
                        sp += 1
    return fx, fy, fz


@njit(cache=True)
def _charge_forces_bh(
    acc, pos, charge, targets, theta, k_c, r_min, seed,
    children, leaf_start, leaf_count, members, cell_q, coq, quad, offset, half,
):
    stack = np.empty(_STACK_CAP, dtype=np.int64)
    r_min2 = r_min * r_min
    for a in range(targets.shape[0]):
        t = targets[a]
        fx, fy, fz = _bh_one_target(
            t, pos, charge, theta, k_c, r_min2, seed,
            children, leaf_start, leaf_count, members, cell_q, coq, quad, offset, half, stack,
        )
        acc[t, 0] += fx
        acc[t, 1] += fy
        acc[t, 2] += fz


def charge_forces_bh(acc, pos, charge, targets, theta, k_c, r_min, seed, tree):
    if targets.size == 0 or tree.n_cells == 0:
        return
    _charge_forces_bh(
        acc, pos, charge, targets, theta, k_c, r_min, seed,
        tree.children, tree.leaf_start, tree.leaf_count, tree.members,
        tree.cell_charge, tree.cell_coq, tree.cell_quad, tree.coq_offset, tree.half,
    )


@njit(cache=True)
def grouping_forces(acc, pos, pair_i, pair_j, k):
    for p in range(pair_i.shape[0]):
        i = pair_i[p]
        j = pair_j[p]
        fx = k * (pos[j, 0] - pos[i, 0])
        fy = k * (pos[j, 1] - pos[i, 1])
        fz = k * (pos[j, 2] - pos[i, 2])
        acc[i, 0] += fx
        acc[i, 1] += fy
        acc[i, 2] += fz
        acc[j, 0] -= fx
        acc[j, 1] -= fy
        acc[j, 2] -= fz


@njit(cache=True)
def room_repulsion_forces(acc, pos, pair_i, pair_j, k, seed):
    for p in range(pair_i.shape[0]):
        i = pair_i[p]
        j = pair_j[p]
        dx = pos[i, 0] - pos[j, 0]
        dz = pos[i, 2] - pos[j, 2]
        r = math.sqrt(dx * dx + dz * dz)
        if r <= 0.0:
            ang = _pair_angle(seed, i, j)
            ux = math.cos(ang)
            uz = math.sin(ang)
            f = k / 0.5
        else:
            ux = dx / r
            uz = dz / r
            f = k / max(r, 0.5)
        acc[i, 0] += f * ux
        acc[i, 2] += f * uz
        acc[j, 0] -= f * ux
        acc[j, 2] -= f * uz


@njit(cache=True)
def floor_repulsion_forces(acc, pos, level, k):
    n = level.shape[0]
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


@njit(cache=True)
def anchor_forces(acc, pos, anchor_idx, anchor_pos, k):
    for a in range(anchor_idx.shape[0]):
        i = anchor_idx[a]
        acc[i, 0] += k * (anchor_pos[a, 0] - pos[i, 0])
        acc[i, 1] += k * (anchor_pos[a, 1] - pos[i, 1])
        acc[i, 2] += k * (anchor_pos[a, 2] - pos[i, 2])


@njit(cache=True)
def collision_pass(pos, pair_i, pair_j, radius, mass, movable, seed):
    for p in range(pair_i.shape[0]):
        i = pair_i[p]
        j = pair_j[p]
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
            ang = _pair_angle(seed, i, j)
            ux = math.cos(ang)
            uz = math.sin(ang)
        else:
            ux = dx / rh
            uz = dz / rh
        mi = movable[i]
        mj = movable[j]
        if not mi and not mj:
            continue
        if mi and mj:
            wi = mass[j] / (mass[i] + mass[j])
            wj = 1.0 - wi
        elif mi:
            wi = 1.0
            wj = 0.0
        else:
            wi = 0.0
            wj = 1.0
        pos[i, 0] += overlap * wi * ux
        pos[i, 2] += overlap * wi * uz
        pos[j, 0] -= overlap * wj * ux
        pos[j, 2] -= overlap * wj * uz


@njit(cache=True)
def collision_residual(pos, pair_i, pair_j, radius):
    worst = 0.0
    for p in range(pair_i.shape[0]):
        i = pair_i[p]
        j = pair_j[p]
        dx = pos[i, 0] - pos[j, 0]
        dy = pos[i, 1] - pos[j, 1]
        dz = pos[i, 2] - pos[j, 2]
        overlap = (radius[i] + radius[j]) - math.sqrt(dx * dx + dy * dy + dz * dz)
        if overlap > worst:
            worst = overlap
    return worst
