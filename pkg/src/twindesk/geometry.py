"""Rigid-body geometry: quaternions, transforms, and poses.

Quaternions are float64 arrays in [w, x, y, z] order, kept unit-norm and
canonicalized to w >= 0 so that equal rotations compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

QUAT_IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q):
    q = np.asarray(q, dtype=np.float64)
    n = math.sqrt(float(q @ q))
    if n == 0.0:
        raise ValueError("zero-norm quaternion")
    return q / n


def quat_canonical(q):
    """Unit quaternion with a non-negative leading component."""
    q = quat_normalize(q)
    for c in q:
        if c > 0.0:
            return q
        if c < 0.0:
            return -q
    return q


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_rotate(q, v):
    """Rotate vector(s) v by unit quaternion q. v is (3,) or (n, 3)."""
    v = np.asarray(v, dtype=np.float64)
    u = np.asarray(q[1:4])
    w = q[0]
    t = 2.0 * np.cross(u, v)
    return v + w * t + np.cross(u, t)


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=np.float64)
    half = 0.5 * angle
    s = math.sin(half)
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_from_matrix(m):
    """Unit quaternion of a 3x3 rotation matrix (Shepperd's method)."""
    # scalar throughout: this sits on the IK inner loop
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = np.asarray(m, dtype=np.float64).tolist()
    tr = m00 + m11 + m22
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        q = [0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s]
    elif m00 >= m11 and m00 >= m22:
        s = math.sqrt(1.0 + m00 - m11 - m22) * 2.0
        q = [(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s]
    elif m11 >= m22:
        s = math.sqrt(1.0 + m11 - m00 - m22) * 2.0
        q = [(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s]
    else:
        s = math.sqrt(1.0 + m22 - m00 - m11) * 2.0
        q = [(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s]
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    if n == 0.0:
        raise ValueError("zero-norm quaternion")
    w, x, y, z = w / n, x / n, y / n, z / n
    for c in (w, x, y, z):
        if c > 0.0:
            return np.array([w, x, y, z])
        if c < 0.0:
            return np.array([-w, -x, -y, -z])
    return np.array([w, x, y, z])


def quat_to_matrix(q):
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def rotation_error_vec(q_target, q_current):
    """Axis-angle vector of the world-frame rotation taking current to target.

    Computes quat_canonical(quat_mul(q_target, quat_conj(q_current))) in scalar
    form; like quat_from_matrix this runs once per IK trial step."""
    aw, ax, ay, az = (float(v) for v in q_target)
    bw, bx, by, bz = (float(v) for v in q_current)
    # b conjugated, multiplied out
    ew = aw * bw + ax * bx + ay * by + az * bz
    ex = -aw * bx + ax * bw - ay * bz + az * by
    ey = -aw * by + ax * bz + ay * bw - az * bx
    ez = -aw * bz - ax * by + ay * bx + az * bw
    n = math.sqrt(ew * ew + ex * ex + ey * ey + ez * ez)
    if n == 0.0:
        raise ValueError("zero-norm quaternion")
    ew, ex, ey, ez = ew / n, ex / n, ey / n, ez / n
    for c in (ew, ex, ey, ez):
        if c > 0.0:
            break
        if c < 0.0:
            ew, ex, ey, ez = -ew, -ex, -ey, -ez
            break
    s = math.sqrt(ex * ex + ey * ey + ez * ez)
    if s < 1e-12:
        return np.zeros(3)
    k = 2.0 * math.atan2(s, ew) / s
    return np.array([ex * k, ey * k, ez * k])


def quat_angle(q_a, q_b):
    """Absolute rotation angle between two unit quaternions, radians."""
    d = abs(float(np.dot(q_a, q_b)))
    return 2.0 * math.acos(min(1.0, d))


@dataclass
class Transform:
    """Rigid transform: rotate by q then translate by t."""

    t: np.ndarray = field(default_factory=lambda: np.zeros(3))
    q: np.ndarray = field(default_factory=lambda: QUAT_IDENTITY.copy())

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=np.float64).reshape(3)
        self.q = np.asarray(self.q, dtype=np.float64).reshape(4)

    @staticmethod
    def identity() -> "Transform":
        return Transform()

    def compose(self, other: "Transform") -> "Transform":
        return Transform(self.t + quat_rotate(self.q, other.t), quat_mul(self.q, other.q))

    def apply(self, points):
        return quat_rotate(self.q, points) + self.t

    def inverse(self) -> "Transform":
        qi = quat_conj(self.q)
        return Transform(-quat_rotate(qi, self.t), qi)

    def rotation_matrix(self):
        return quat_to_matrix(self.q)


@dataclass
class Pose:
    """Position (m) plus unit-quaternion orientation, canonicalized to w >= 0."""

    position: np.ndarray
    orientation: np.ndarray = field(default_factory=lambda: QUAT_IDENTITY.copy())

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        self.orientation = np.asarray(self.orientation, dtype=np.float64).reshape(4)

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.zeros(3))

    def canonical(self) -> "Pose":
        return Pose(self.position.copy(), quat_canonical(self.orientation))

    def as_transform(self) -> Transform:
        return Transform(self.position, self.orientation)

    def almost_equal(self, other: "Pose", tol_pos=1e-9, tol_rot=1e-9) -> bool:
        if np.max(np.abs(self.position - other.position)) > tol_pos:
            return False
        return quat_angle(quat_canonical(self.orientation), quat_canonical(other.orientation)) <= tol_rot


def look_at_quat(eye, target, up=(0.0, 0.0, 1.0)):
    """Camera-to-world orientation for a pinhole camera at eye looking at target.

    Camera convention: +x right, +y down, +z forward.
    """
    eye = np.asarray(eye, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    f = target - eye
    fn = np.linalg.norm(f)
    if fn < 1e-12:
        raise ValueError("eye and target coincide")
    f = f / fn
    r = np.cross(f, np.asarray(up, dtype=np.float64))
    rn = np.linalg.norm(r)
    if rn < 1e-9:
        # looking straight along up: pick an arbitrary right vector
        r = np.cross(f, np.array([1.0, 0.0, 0.0]))
        rn = np.linalg.norm(r)
    r = r / rn
    d = np.cross(f, r)
    m = np.column_stack([r, d, f])
    return quat_from_matrix(m)
