from dataclasses import dataclass

import numpy as np

from ..bus import schemas
from .camera import CameraExtrinsics, CameraIntrinsics

CAMERA_FRAME = "camera"
WORLD_FRAME = "world"


@dataclass(frozen=True)
class PointCloud:
    xyz: np.ndarray  # (n, 3) float32, meters
    rgb: np.ndarray  # (n, 3) uint8
    frame: str = CAMERA_FRAME
    timestamp: float = 0.0

    def __post_init__(self):
        xyz = np.asarray(self.xyz, dtype=np.float32).reshape(-1, 3)
        rgb = np.asarray(self.rgb, dtype=np.uint8).reshape(-1, 3)
        if len(xyz) != len(rgb):
            raise ValueError("xyz and rgb lengths differ")
        if self.frame not in (CAMERA_FRAME, WORLD_FRAME):
            raise ValueError(f"unknown frame {self.frame!r}")
        if len(xyz) and not np.all(np.isfinite(xyz)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "xyz", xyz)
        object.__setattr__(self, "rgb", rgb)

    def __len__(self):
        return len(self.xyz)


def empty_cloud(frame: str = WORLD_FRAME, timestamp: float = 0.0) -> PointCloud:
    return PointCloud(
        np.zeros((0, 3), dtype=np.float32), np.zeros((0, 3), dtype=np.uint8), frame, timestamp
    )


def deproject(
    depth_mm: np.ndarray,
    rgb: np.ndarray,
    intrinsics: CameraIntrinsics,
    stride: int = 1,
    timestamp: float = 0.0,
) -> PointCloud:
    """Pinhole back-projection of every stride-th valid pixel, camera frame."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    h, w = depth_mm.shape
    if (w, h) != (intrinsics.width, intrinsics.height):
        raise ValueError("depth frame does not match intrinsics")
    if rgb.shape != (h, w, 3):
        raise ValueError("color frame does not match intrinsics")
    d = depth_mm[::stride, ::stride]
    c = rgb[::stride, ::stride]
    vs, us = np.nonzero(d)
    z = d[vs, us].astype(np.float64) / 1000.0
    u = us.astype(np.float64) * stride
    v = vs.astype(np.float64) * stride
    x = (u - intrinsics.cx) * z / intrinsics.fx
    y = (v - intrinsics.cy) * z / intrinsics.fy
    xyz = np.stack([x, y, z], axis=1).astype(np.float32)
    return PointCloud(xyz, c[vs, us], CAMERA_FRAME, timestamp)


def to_world(cloud: PointCloud, extrinsics: CameraExtrinsics) -> PointCloud:
    if cloud.frame != CAMERA_FRAME:
        raise ValueError("cloud is already in the world frame")
    r = extrinsics.rotation()
    pts = cloud.xyz.astype(np.float64) @ r.T + extrinsics.translation
    return PointCloud(pts.astype(np.float32), cloud.rgb, WORLD_FRAME, cloud.timestamp)


def fuse(clouds) -> PointCloud:
    clouds = list(clouds)
    if not clouds:
        return empty_cloud()
    for c in clouds:
        if c.frame != WORLD_FRAME:
            raise ValueError("fuse requires world-frame clouds")
    xyz = np.concatenate([c.xyz for c in clouds], axis=0)
    rgb = np.concatenate([c.rgb for c in clouds], axis=0)
    ts = max(c.timestamp for c in clouds)
    return PointCloud(xyz, rgb, WORLD_FRAME, ts)


def encode_cloud(cloud: PointCloud) -> bytes:
    return schemas.pack_points(cloud.xyz, cloud.rgb)


def decode_cloud(
    payload: bytes, frame: str = WORLD_FRAME, timestamp: float = 0.0
) -> PointCloud:
    xyz, rgb = schemas.unpack_points(payload)
    return PointCloud(xyz, rgb, frame, timestamp)
