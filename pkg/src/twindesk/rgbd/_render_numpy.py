"""Vectorized raycast fallback.

Every arithmetic expression here is written with the same association and
operand order as the compiled kernel so both produce bit-identical frames.
No dot/matmul reductions: BLAS reassociation would break that contract.
"""

import numpy as np

_EPS_T = 1e-9
_EPS_DIR = 1e-12
_INF = np.inf


def render_arrays(
    width,
    height,
    fx,
    fy,
    cx,
    cy,
    origin,
    rot,
    rect_params,
    rect_colors,
    box_centers,
    box_rots,
    box_halfs,
    box_colors,
    box_p,
    cap_ab,
    cap_len2,
    cap_radius,
    cap_colors,
    cap_m,
    cap_md,
    cap_cyl_c,
    cap_sph_a_c,
    cap_sph_b_c,
):
    ox, oy, oz = (float(origin[0]), float(origin[1]), float(origin[2]))
    u = (np.arange(width, dtype=np.float64) - cx) / fx
    v = (np.arange(height, dtype=np.float64) - cy) / fy
    dxc = np.broadcast_to(u[None, :], (height, width))
    dyc = np.broadcast_to(v[:, None], (height, width))
    r = rot
    dwx = r[0, 0] * dxc + r[0, 1] * dyc + r[0, 2]
    dwy = r[1, 0] * dxc + r[1, 1] * dyc + r[1, 2]
    dwz = r[2, 0] * dxc + r[2, 1] * dyc + r[2, 2]

    tbest = np.full((height, width), _INF)
    rgb = np.zeros((height, width, 3), dtype=np.uint8)

    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(len(rect_params)):
            rcx, rcy, rhx, rhy, rz = rect_params[i]
            t = (rz - oz) / dwz
            px = ox + t * dwx
            py = oy + t * dwy
            hit = (
                (t > _EPS_T)
                & (t < tbest)
                & (np.abs(px - rcx) <= rhx)
                & (np.abs(py - rcy) <= rhy)
            )
            tbest = np.where(hit, t, tbest)
            rgb[hit] = rect_colors[i]

        for i in range(len(box_centers)):
            br = box_rots[i]
            hx, hy, hz = box_halfs[i]
            p0, p1, p2 = box_p[i]
            db0 = br[0, 0] * dwx + br[1, 0] * dwy + br[2, 0] * dwz
            db1 = br[0, 1] * dwx + br[1, 1] * dwy + br[2, 1] * dwz
            db2 = br[0, 2] * dwx + br[1, 2] * dwy + br[2, 2] * dwz
            tlo = np.full((height, width), -_INF)
            thi = np.full((height, width), _INF)
            miss = np.zeros((height, width), dtype=bool)
            for db, p, h in ((db0, p0, hx), (db1, p1, hy), (db2, p2, hz)):
                tiny = np.abs(db) < _EPS_DIR
                safe = np.where(tiny, 1.0, db)
                ta = (-h - p) / safe
                tb = (h - p) / safe
                near = np.where(tiny, -_INF, np.minimum(ta, tb))
                far = np.where(tiny, _INF, np.maximum(ta, tb))
                miss = miss | (tiny & (np.abs(p) > h))
                tlo = np.maximum(tlo, near)
                thi = np.minimum(thi, far)
            hit = (~miss) & (thi >= tlo) & (tlo > _EPS_T) & (tlo < tbest)
            tbest = np.where(hit, tlo, tbest)
            rgb[hit] = box_colors[i]

        dd = dwx * dwx + dwy * dwy + dwz * dwz
        for i in range(len(cap_ab)):
            abx, aby, abz = cap_ab[i]
            mx, my, mz = cap_m[i]
            length2 = cap_len2[i]
            radius = cap_radius[i]
            md = cap_md[i]
            da = dwx * abx + dwy * aby + dwz * abz
            dm = dwx * mx + dwy * my + dwz * mz
            a = dd - da * da / length2
            b = 2.0 * (dm - da * md / length2)
            disc = b * b - 4.0 * a * cap_cyl_c[i]
            sq = np.sqrt(np.maximum(disc, 0.0))
            safe_a = np.where(a > _EPS_DIR, a, 1.0)
            t_cyl = (-b - sq) / (2.0 * safe_a)
            s = (md + t_cyl * da) / length2
            ok_cyl = (a > _EPS_DIR) & (disc >= 0.0) & (t_cyl > _EPS_T) & (s >= 0.0) & (s <= 1.0)
            tc = np.where(ok_cyl, t_cyl, _INF)

            disc_a = dm * dm - dd * cap_sph_a_c[i]
            sq_a = np.sqrt(np.maximum(disc_a, 0.0))
            t_a = (-dm - sq_a) / dd
            ok_a = (disc_a >= 0.0) & (t_a > _EPS_T)
            tc = np.minimum(tc, np.where(ok_a, t_a, _INF))

            dm2 = dm - da  # dw . (m - ab)
            disc_b = dm2 * dm2 - dd * cap_sph_b_c[i]
            sq_b = np.sqrt(np.maximum(disc_b, 0.0))
            t_b = (-dm2 - sq_b) / dd
            ok_b = (disc_b >= 0.0) & (t_b > _EPS_T)
            tc = np.minimum(tc, np.where(ok_b, t_b, _INF))

            hit = tc < tbest
            tbest = np.where(hit, tc, tbest)
            rgb[hit] = cap_colors[i]

    mm = np.rint(tbest * 1000.0)
    valid = np.isfinite(tbest) & (mm >= 1.0) & (mm <= 65535.0)
    depth = np.where(valid, mm, 0.0).astype(np.uint16)
    rgb[~valid] = 0
    return depth, rgb
