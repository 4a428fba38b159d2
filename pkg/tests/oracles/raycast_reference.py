"""Independent raycast and surface-distance reference.

Deliberately different algorithms from the production renderer: ray-box by
intersecting the six face planes (not slabs), and a generic first-hit finder
by marching + bisection on signed distance fields. Used to validate renderer
depth values and reconstruction fidelity.
"""

import math

import numpy as np


def _quat_to_matrix(q):
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


# --------------------------------------------------------- face-plane ray-box


def ray_box_t(origin, direction, center, quat, half, eps=1e-12):
    """First positive ray parameter hitting an oriented box, via its 6 faces.

    direction need not be normalized; the returned t satisfies
    hit = origin + t * direction.  Returns None on miss.
    """
    r = _quat_to_matrix(np.asarray(quat, dtype=float))
    o = r.T @ (np.asarray(origin, dtype=float) - np.asarray(center, dtype=float))
    d = r.T @ np.asarray(direction, dtype=float)
    half = np.asarray(half, dtype=float)
    best = None
    for axis in range(3):
        for sign in (-1.0, 1.0):
            if abs(d[axis]) < eps:
                continue
            t = (sign * half[axis] - o[axis]) / d[axis]
            if t <= eps:
                continue
            p = o + t * d
            others = [i for i in range(3) if i != axis]
            if all(abs(p[i]) <= half[i] + 1e-12 for i in others):
                if best is None or t < best:
                    best = t
    return best


# --------------------------------------------------------- signed distances


def dist_to_box(p, center, quat, half):
    r = _quat_to_matrix(np.asarray(quat, dtype=float))
    q = np.abs(r.T @ (np.asarray(p, dtype=float) - np.asarray(center, dtype=float))) - half
    outside = np.linalg.norm(np.maximum(q, 0.0))
    inside = min(max(q[0], q[1], q[2]), 0.0)
    return outside + inside


def dist_to_rect(p, center_xy, half_xy, z):
    dx = max(abs(p[0] - center_xy[0]) - half_xy[0], 0.0)
    dy = max(abs(p[1] - center_xy[1]) - half_xy[1], 0.0)
    return math.sqrt(dx * dx + dy * dy + (p[2] - z) ** 2)


def dist_to_capsule(p, a, b, radius):
    a = np.asarray(a, dtype=float)
    ab = np.asarray(b, dtype=float) - a
    s = float(np.clip((p - a) @ ab / (ab @ ab), 0.0, 1.0))
    return abs(float(np.linalg.norm(p - (a + s * ab))) - radius)


def surface_distance(p, prims) -> float:
    """Unsigned distance from p to the nearest primitive surface."""
    best = math.inf
    for kind, args in prims:
        if kind == "rect":
            d = dist_to_rect(p, *args)
        elif kind == "box":
            d = abs(dist_to_box(p, *args))
        elif kind == "capsule":
            d = dist_to_capsule(p, *args)
        else:
            raise ValueError(kind)
        best = min(best, d)
    return best


# --------------------------------------------------------- SDF first hit


def _scene_sdf(p, prims):
    best = math.inf
    for kind, args in prims:
        if kind == "rect":
            # the render rect is zero-thickness, which an SDF march cannot
            # cross-detect; model it as the top face of a deep solid slab
            center_xy, half_xy, z = args
            d = dist_to_box(
                p,
                (center_xy[0], center_xy[1], z - 0.5),
                (1.0, 0.0, 0.0, 0.0),
                (half_xy[0], half_xy[1], 0.5),
            )
        elif kind == "box":
            d = dist_to_box(p, *args)
        elif kind == "capsule":
            a, b, radius = args
            a = np.asarray(a, dtype=float)
            ab = np.asarray(b, dtype=float) - a
            s = float(np.clip((p - a) @ ab / (ab @ ab), 0.0, 1.0))
            d = float(np.linalg.norm(p - (a + s * ab))) - radius
        best = min(best, d)
    return best


def sdf_first_hit(origin, direction, prims, t_max=6.0, step=5e-4, refine=60):
    """First surface crossing along the ray by fine marching then bisection.

    Slow and simple on purpose. direction is used unnormalized so t matches
    the renderer's depth parameterization.
    """
    o = np.asarray(origin, dtype=float)
    d = np.asarray(direction, dtype=float)
    dn = float(np.linalg.norm(d))
    prev_t, prev_v = 0.0, _scene_sdf(o, prims)
    if prev_v <= 0:
        return 0.0
    t = 0.0
    while t < t_max:
        # safe march: never step past the nearest surface by more than `step`
        t = prev_t + max(prev_v / dn, step)
        v = _scene_sdf(o + t * d, prims)
        if v <= 0.0:
            lo, hi = prev_t, t
            for _ in range(refine):
                mid = 0.5 * (lo + hi)
                if _scene_sdf(o + mid * d, prims) <= 0.0:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
        prev_t, prev_v = t, v
    return None


if __name__ == "__main__":
    # frozen spot checks for the renderer tests
    cube = ("box", ((0.38, 0.0, 0.02), (1.0, 0.0, 0.0, 0.0), (0.02, 0.02, 0.02)))
    origin = (0.38, -1.0, 0.5)
    to_center = np.array([0.0, 1.0, -0.48])
    t_face = ray_box_t(origin, to_center, *cube[1])
    t_sdf = sdf_first_hit(origin, to_center, [cube])
    print(f"cube face-plane t = {t_face!r}")
    print(f"cube sdf t        = {t_sdf!r}")
    slanted = np.array([0.01, 1.0, -0.47])
    print(f"slanted face t    = {ray_box_t(origin, slanted, *cube[1])!r}")
    print(f"slanted sdf t     = {sdf_first_hit(origin, slanted, [cube])!r}")
    cap = ("capsule", ((0.0, 0.0, 0.1), (0.0, 0.0, 0.6), 0.04))
    print(f"capsule sdf t     = {sdf_first_hit((0.0, -1.0, 0.3), (0.0, 1.0, 0.0), [cap])!r}")
