# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled raycast kernel.

Mirrors _render_numpy.render_arrays expression-for-expression; the build
disables FP contraction so both backends emit bit-identical frames.
"""

from cython.parallel cimport prange
from libc.math cimport INFINITY, fabs, fmax, fmin, rint, sqrt

import numpy as np


def render_arrays(
    int width,
    int height,
    double fx,
    double fy,
    double cx,
    double cy,
    double[::1] origin,
    double[:, ::1] rot,
    double[:, ::1] rect_params,
    unsigned char[:, ::1] rect_colors,
    double[:, ::1] box_centers,
    double[:, :, ::1] box_rots,
    double[:, ::1] box_halfs,
    unsigned char[:, ::1] box_colors,
    double[:, ::1] box_p,
    double[:, ::1] cap_ab,
    double[::1] cap_len2,
    double[::1] cap_radius,
    unsigned char[:, ::1] cap_colors,
    double[:, ::1] cap_m,
    double[::1] cap_md,
    double[::1] cap_cyl_c,
    double[::1] cap_sph_a_c,
    double[::1] cap_sph_b_c,
):
    depth_arr = np.zeros((height, width), dtype=np.uint16)
    rgb_arr = np.zeros((height, width, 3), dtype=np.uint8)
    cdef unsigned short[:, ::1] depth = depth_arr
    cdef unsigned char[:, :, ::1] rgb = rgb_arr

    cdef int n_rect = rect_params.shape[0]
    cdef int n_box = box_centers.shape[0]
    cdef int n_cap = cap_ab.shape[0]
    cdef double ox = origin[0], oy = origin[1], oz = origin[2]
    cdef double r00 = rot[0, 0], r01 = rot[0, 1], r02 = rot[0, 2]
    cdef double r10 = rot[1, 0], r11 = rot[1, 1], r12 = rot[1, 2]
    cdef double r20 = rot[2, 0], r21 = rot[2, 1], r22 = rot[2, 2]

    cdef int u, v, i, ax
    cdef double dxc, dyc, dwx, dwy, dwz, dd
    cdef double tbest, t, px, py
    cdef int best
    cdef double rcx, rcy, rhx, rhy, rz
    cdef double db0, db1, db2, db, p, h, safe, ta, tb, near, far, tlo, thi
    cdef bint missed, tiny
    cdef double abx, aby, abz, mx, my, mz, length2, radius_sq_c, md
    cdef double da, dm, a, b, disc, sq, t_cyl, s, tc
    cdef double disc_a, t_a, dm2, disc_b, t_b
    cdef double mmv

    with nogil:
        for v in prange(height, schedule="static"):
            for u in range(width):
                dxc = (u - cx) / fx
                dyc = (v - cy) / fy
                dwx = r00 * dxc + r01 * dyc + r02
                dwy = r10 * dxc + r11 * dyc + r12
                dwz = r20 * dxc + r21 * dyc + r22
                tbest = INFINITY
                best = -1

                for i in range(n_rect):
                    rcx = rect_params[i, 0]
                    rcy = rect_params[i, 1]
                    rhx = rect_params[i, 2]
                    rhy = rect_params[i, 3]
                    rz = rect_params[i, 4]
                    t = (rz - oz) / dwz
                    if t > 1e-9 and t < tbest:
                        px = ox + t * dwx
                        py = oy + t * dwy
                        if fabs(px - rcx) <= rhx and fabs(py - rcy) <= rhy:
                            tbest = t
                            best = i

                for i in range(n_box):
                    db0 = box_rots[i, 0, 0] * dwx + box_rots[i, 1, 0] * dwy + box_rots[i, 2, 0] * dwz
                    db1 = box_rots[i, 0, 1] * dwx + box_rots[i, 1, 1] * dwy + box_rots[i, 2, 1] * dwz
                    db2 = box_rots[i, 0, 2] * dwx + box_rots[i, 1, 2] * dwy + box_rots[i, 2, 2] * dwz
                    tlo = -INFINITY
                    thi = INFINITY
                    missed = 0
                    for ax in range(3):
                        if ax == 0:
                            db = db0
                        elif ax == 1:
                            db = db1
                        else:
                            db = db2
                        p = box_p[i, ax]
                        h = box_halfs[i, ax]
                        tiny = fabs(db) < 1e-12
                        if tiny:
                            if fabs(p) > h:
                                missed = 1
                        else:
                            ta = (-h - p) / db
                            tb = (h - p) / db
                            near = fmin(ta, tb)
                            far = fmax(ta, tb)
                            tlo = fmax(tlo, near)
                            thi = fmin(thi, far)
                    if (not missed) and thi >= tlo and tlo > 1e-9 and tlo < tbest:
                        tbest = tlo
                        best = 1000 + i

                dd = dwx * dwx + dwy * dwy + dwz * dwz
                for i in range(n_cap):
                    abx = cap_ab[i, 0]
                    aby = cap_ab[i, 1]
                    abz = cap_ab[i, 2]
                    mx = cap_m[i, 0]
                    my = cap_m[i, 1]
                    mz = cap_m[i, 2]
                    length2 = cap_len2[i]
                    md = cap_md[i]
                    da = dwx * abx + dwy * aby + dwz * abz
                    dm = dwx * mx + dwy * my + dwz * mz
                    a = dd - da * da / length2
                    b = 2.0 * (dm - da * md / length2)
                    disc = b * b - 4.0 * a * cap_cyl_c[i]
                    tc = INFINITY
                    if a > 1e-12 and disc >= 0.0:
                        sq = sqrt(disc)
                        t_cyl = (-b - sq) / (2.0 * a)
                        if t_cyl > 1e-9:
                            s = (md + t_cyl * da) / length2
                            if s >= 0.0 and s <= 1.0:
                                tc = t_cyl
                    disc_a = dm * dm - dd * cap_sph_a_c[i]
                    if disc_a >= 0.0:
                        t_a = (-dm - sqrt(disc_a)) / dd
                        if t_a > 1e-9:
                            tc = fmin(tc, t_a)
                    dm2 = dm - da
                    disc_b = dm2 * dm2 - dd * cap_sph_b_c[i]
                    if disc_b >= 0.0:
                        t_b = (-dm2 - sqrt(disc_b)) / dd
                        if t_b > 1e-9:
                            tc = fmin(tc, t_b)
                    if tc < tbest:
                        tbest = tc
                        best = 2000 + i

                if best >= 0:
                    mmv = rint(tbest * 1000.0)
                    if mmv >= 1.0 and mmv <= 65535.0:
                        depth[v, u] = <unsigned short> mmv
                        if best >= 2000:
                            rgb[v, u, 0] = cap_colors[best - 2000, 0]
                            rgb[v, u, 1] = cap_colors[best - 2000, 1]
                            rgb[v, u, 2] = cap_colors[best - 2000, 2]
                        elif best >= 1000:
                            rgb[v, u, 0] = box_colors[best - 1000, 0]
                            rgb[v, u, 1] = box_colors[best - 1000, 1]
                            rgb[v, u, 2] = box_colors[best - 1000, 2]
                        else:
                            rgb[v, u, 0] = rect_colors[best, 0]
                            rgb[v, u, 1] = rect_colors[best, 1]
                            rgb[v, u, 2] = rect_colors[best, 2]

    return depth_arr, rgb_arr
