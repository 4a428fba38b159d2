"""Analytic scene primitives fed to the raycaster.

Everything the cameras can see reduces to three shapes: the table rectangle,
oriented cube boxes, and arm-link capsules between consecutive joint frames.
"""

from dataclasses import dataclass

import numpy as np

from ..geometry import quat_to_matrix
from ..kinematics import fk_frames

TABLE_COLOR = (196, 196, 200)
ARM_COLOR = (96, 96, 108)
GRIPPER_COLOR = (40, 40, 46)
CUBE_PALETTE = (
    (204, 64, 52),
    (72, 168, 84),
    (64, 96, 204),
    (212, 180, 56),
    (160, 72, 196),
    (56, 184, 196),
)

ARM_LINK_RADIUS = 0.038
MIN_LINK_LENGTH = 1e-6


@dataclass(frozen=True)
class TableRect:
    center: tuple  # x, y
    half: tuple  # half extents in x, y
    z: float
    color: tuple


@dataclass(frozen=True)
class Box:
    center: tuple
    quat: tuple  # box-to-world
    half: tuple
    color: tuple


@dataclass(frozen=True)
class Capsule:
    a: tuple
    b: tuple
    radius: float
    color: tuple


def cube_color(index: int) -> tuple:
    return CUBE_PALETTE[index % len(CUBE_PALETTE)]


def arm_capsules(arm, q, radius: float = ARM_LINK_RADIUS) -> list:
    frames = fk_frames(arm, q)
    pts = [f.t for f in frames]
    caps = []
    for a, b in zip(pts, pts[1:]):
        if np.linalg.norm(b - a) < MIN_LINK_LENGTH:
            continue  # coincident joint origins contribute no visible link
        caps.append(Capsule(tuple(a), tuple(b), radius, ARM_COLOR))
    return caps


def scene_primitives(world, arm, q, config) -> list:
    prims = [
        TableRect(
            tuple(config.table_center),
            (config.table_size[0] / 2.0, config.table_size[1] / 2.0),
            config.table_height,
            TABLE_COLOR,
        )
    ]
    h = config.cube_size / 2.0
    for i, cube in enumerate(sorted(world.cubes, key=lambda c: c.id)):
        prims.append(
            Box(
                tuple(cube.pose.position),
                tuple(cube.pose.orientation),
                (h, h, h),
                cube_color(i),
            )
        )
    prims.extend(arm_capsules(arm, q))
    # stub for the gripper body so the operator sees the tool, not a bare wrist
    g = world.gripper_pose
    prims.append(Box(tuple(g.position), tuple(g.orientation), (0.02, 0.04, 0.03), GRIPPER_COLOR))
    return prims


def pack_primitives(prims) -> dict:
    """Flatten primitives into the contiguous arrays both render backends take."""
    rects, boxes, caps = [], [], []
    for p in prims:
        if isinstance(p, TableRect):
            rects.append(p)
        elif isinstance(p, Box):
            boxes.append(p)
        elif isinstance(p, Capsule):
            caps.append(p)
        else:
            raise TypeError(f"unknown primitive {type(p).__name__}")

    out = {
        "rect_params": np.zeros((len(rects), 5)),
        "rect_colors": np.zeros((len(rects), 3), dtype=np.uint8),
        "box_centers": np.zeros((len(boxes), 3)),
        "box_rots": np.zeros((len(boxes), 3, 3)),
        "box_halfs": np.zeros((len(boxes), 3)),
        "box_colors": np.zeros((len(boxes), 3), dtype=np.uint8),
        "cap_a": np.zeros((len(caps), 3)),
        "cap_ab": np.zeros((len(caps), 3)),
        "cap_len2": np.zeros(len(caps)),
        "cap_radius": np.zeros(len(caps)),
        "cap_colors": np.zeros((len(caps), 3), dtype=np.uint8),
    }
    for i, r in enumerate(rects):
        out["rect_params"][i] = (r.center[0], r.center[1], r.half[0], r.half[1], r.z)
        out["rect_colors"][i] = r.color
    for i, b in enumerate(boxes):
        out["box_centers"][i] = b.center
        out["box_rots"][i] = quat_to_matrix(np.asarray(b.quat, dtype=float))
        out["box_halfs"][i] = b.half
        out["box_colors"][i] = b.color
    for i, c in enumerate(caps):
        a = np.asarray(c.a, dtype=float)
        b = np.asarray(c.b, dtype=float)
        ab = b - a
        out["cap_a"][i] = a
        out["cap_ab"][i] = ab
        out["cap_len2"][i] = ab @ ab
        out["cap_radius"][i] = c.radius
        out["cap_colors"][i] = c.color
    return out
