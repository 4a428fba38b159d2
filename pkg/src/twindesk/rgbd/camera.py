import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import look_at_quat, quat_to_matrix


@dataclass(frozen=True)
class CameraIntrinsics:
    width: int = 1280
    height: int = 720
    fx: float = 700.0
    fy: float = 700.0
    cx: float = 639.5
    cy: float = 359.5

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("frame dimensions must be positive")
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point must lie inside the frame")


@dataclass(frozen=True)
class CameraExtrinsics:
    """Camera-to-world rigid transform. Camera axes: +x right, +y down, +z forward."""

    translation: np.ndarray
    quat: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float).reshape(3)
        q = np.asarray(self.quat, dtype=float).reshape(4)
        if abs(float(q @ q) - 1.0) > 1e-9:
            raise ValueError("extrinsics quaternion must be unit norm")
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "quat", q)

    def rotation(self) -> np.ndarray:
        return quat_to_matrix(self.quat)


@dataclass(frozen=True)
class CameraRig:
    cam_id: str
    intrinsics: CameraIntrinsics
    extrinsics: CameraExtrinsics


def default_rig(
    center=(0.38, 0.0, 0.0),
    radius: float = 1.5,
    pitch_deg: float = 35.0,
    angles_deg=(120.0, 240.0),
    intrinsics: CameraIntrinsics | None = None,
) -> list:
    """Two cameras on a circle around the target zone, pitched down toward it."""
    intrinsics = intrinsics or CameraIntrinsics()
    center = np.asarray(center, dtype=float)
    height = radius * math.tan(math.radians(pitch_deg))
    rig = []
    for i, ang in enumerate(angles_deg):
        a = math.radians(ang)
        eye = center + np.array([radius * math.cos(a), radius * math.sin(a), height])
        ext = CameraExtrinsics(eye, look_at_quat(eye, center))
        rig.append(CameraRig(f"cam{i}", intrinsics, ext))
    return rig
