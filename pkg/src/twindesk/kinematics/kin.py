"""Forward kinematics, geometric Jacobian, and limit clamping."""

from __future__ import annotations

import math

import numpy as np

from ..geometry import Pose, Transform, quat_from_axis_angle, quat_from_matrix
from .model import ArmModel


def _check_q(arm: ArmModel, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (arm.n,):
        raise ValueError(f"expected {arm.n} joint values, got shape {q.shape}")
    return q


def _walk(arm: ArmModel, q: np.ndarray):
    """Single chain pass: world axes, joint pivots, tool position+rotation.

    Written out in scalar arithmetic: this runs once per IK trial step, and at
    3x3 size numpy dispatch costs more than the math itself."""
    c = arm.chain
    ql = [float(v) for v in q]
    axes = []
    pivots = []
    px = py = pz = 0.0
    r00, r01, r02 = 1.0, 0.0, 0.0
    r10, r11, r12 = 0.0, 1.0, 0.0
    r20, r21, r22 = 0.0, 0.0, 1.0
    for i, (tx, ty, tz, o00, o01, o02, o10, o11, o12, o20, o21, o22, ax, ay, az) in enumerate(
        c.flat
    ):
        px += r00 * tx + r01 * ty + r02 * tz
        py += r10 * tx + r11 * ty + r12 * tz
        pz += r20 * tx + r21 * ty + r22 * tz
        # r = r @ origin_r
        r00, r01, r02, r10, r11, r12, r20, r21, r22 = (
            r00 * o00 + r01 * o10 + r02 * o20,
            r00 * o01 + r01 * o11 + r02 * o21,
            r00 * o02 + r01 * o12 + r02 * o22,
            r10 * o00 + r11 * o10 + r12 * o20,
            r10 * o01 + r11 * o11 + r12 * o21,
            r10 * o02 + r11 * o12 + r12 * o22,
            r20 * o00 + r21 * o10 + r22 * o20,
            r20 * o01 + r21 * o11 + r22 * o21,
            r20 * o02 + r21 * o12 + r22 * o22,
        )
        axes.append((r00 * ax + r01 * ay + r02 * az,
                     r10 * ax + r11 * ay + r12 * az,
                     r20 * ax + r21 * ay + r22 * az))
        pivots.append((px, py, pz))
        # r = r @ rotation(axis, q[i]), Rodrigues form
        ct = math.cos(ql[i])
        st = math.sin(ql[i])
        t = 1.0 - ct
        m00 = ct + ax * ax * t
        m01 = ax * ay * t - az * st
        m02 = ax * az * t + ay * st
        m10 = ay * ax * t + az * st
        m11 = ct + ay * ay * t
        m12 = ay * az * t - ax * st
        m20 = az * ax * t - ay * st
        m21 = az * ay * t + ax * st
        m22 = ct + az * az * t
        r00, r01, r02, r10, r11, r12, r20, r21, r22 = (
            r00 * m00 + r01 * m10 + r02 * m20,
            r00 * m01 + r01 * m11 + r02 * m21,
            r00 * m02 + r01 * m12 + r02 * m22,
            r10 * m00 + r11 * m10 + r12 * m20,
            r10 * m01 + r11 * m11 + r12 * m21,
            r10 * m02 + r11 * m12 + r12 * m22,
            r20 * m00 + r21 * m10 + r22 * m20,
            r20 * m01 + r21 * m11 + r22 * m21,
            r20 * m02 + r21 * m12 + r22 * m22,
        )
    tx, ty, tz, o00, o01, o02, o10, o11, o12, o20, o21, o22 = c.tool_flat
    p_tool = np.array(
        [
            px + r00 * tx + r01 * ty + r02 * tz,
            py + r10 * tx + r11 * ty + r12 * tz,
            pz + r20 * tx + r21 * ty + r22 * tz,
        ]
    )
    r_tool = np.array(
        [
            [
                r00 * o00 + r01 * o10 + r02 * o20,
                r00 * o01 + r01 * o11 + r02 * o21,
                r00 * o02 + r01 * o12 + r02 * o22,
            ],
            [
                r10 * o00 + r11 * o10 + r12 * o20,
                r10 * o01 + r11 * o11 + r12 * o21,
                r10 * o02 + r11 * o12 + r12 * o22,
            ],
            [
                r20 * o00 + r21 * o10 + r22 * o20,
                r20 * o01 + r21 * o11 + r22 * o21,
                r20 * o02 + r21 * o12 + r22 * o22,
            ],
        ]
    )
    return np.array(axes), np.array(pivots), p_tool, r_tool


def fk(arm: ArmModel, q) -> Pose:
    q = _check_q(arm, q)
    _, _, p_tool, r_tool = _walk(arm, q)
    return Pose(p_tool, quat_from_matrix(r_tool)).canonical()


def fk_frames(arm: ArmModel, q) -> list[Transform]:
    """Per-joint frames after each joint's rotation, then the tool frame.

    Entry i < n sits at joint i's pivot; entry n is the tool. Length n+1."""
    q = _check_q(arm, q)
    frames = []
    t = Transform.identity()
    for spec, qi in zip(arm.joints, q):
        t = t.compose(spec.origin)
        t = t.compose(Transform(np.zeros(3), quat_from_axis_angle(spec.axis, qi)))
        frames.append(t)
    frames.append(t.compose(arm.tool_offset))
    return frames


def jacobian(arm: ArmModel, q) -> np.ndarray:
    """Geometric Jacobian at the tool point: rows (linear xyz, angular xyz)."""
    q = _check_q(arm, q)
    axes, pivots, p_tool, _ = _walk(arm, q)
    return _tool_jacobian(arm.n, axes, pivots, p_tool)


def _tool_jacobian(n: int, axes, pivots, p_tool) -> np.ndarray:
    # cross product spelled out on the column slices; np.cross on (n, 3)
    # operands spends its time in moveaxis broadcasting
    jac = np.empty((6, n))
    ax, ay, az = axes[:, 0], axes[:, 1], axes[:, 2]
    dx = p_tool[0] - pivots[:, 0]
    dy = p_tool[1] - pivots[:, 1]
    dz = p_tool[2] - pivots[:, 2]
    jac[0] = ay * dz - az * dy
    jac[1] = az * dx - ax * dz
    jac[2] = ax * dy - ay * dx
    jac[3] = ax
    jac[4] = ay
    jac[5] = az
    return jac


def clamp_to_limits(arm: ArmModel, q) -> np.ndarray:
    q = _check_q(arm, q)
    c = arm.chain
    return np.clip(q, c.lo, c.hi)


def within_limits(arm: ArmModel, q, tol: float = 0.0) -> bool:
    q = _check_q(arm, q)
    c = arm.chain
    return bool(np.all(q >= c.lo - tol) and np.all(q <= c.hi + tol))


def wrap_into_limits(arm: ArmModel, q) -> np.ndarray:
    """Bring each joint inside its limits, preferring a 2pi-equivalent angle
    (same fk) over clamping so wide-limit joints have no artificial walls."""
    q = _check_q(arm, q)
    c = arm.chain
    out = q.tolist()
    los = c.lo.tolist()
    his = c.hi.tolist()
    two_pi = 2.0 * math.pi
    for i, qi in enumerate(out):
        lo, hi = los[i], his[i]
        if qi < lo:
            k = math.ceil((lo - qi) / two_pi)
            cand = qi + k * two_pi
            out[i] = cand if cand <= hi else lo
        elif qi > hi:
            k = math.ceil((qi - hi) / two_pi)
            cand = qi - k * two_pi
            out[i] = cand if cand >= lo else hi
    return np.array(out)
