"""Synthetic RGB-D sensing: raycast rendering, deprojection, fusion, throttling."""

from .camera import CameraExtrinsics, CameraIntrinsics, CameraRig, default_rig
from .cloud import PointCloud, decode_cloud, deproject, encode_cloud, fuse, to_world
from .pipeline import SensorStage
from .primitives import Box, Capsule, TableRect, pack_primitives, scene_primitives
from .render import render, render_arrays_backend
from .throttle import Throttle

__all__ = [
    "Box",
    "Capsule",
    "CameraExtrinsics",
    "CameraIntrinsics",
    "CameraRig",
    "PointCloud",
    "SensorStage",
    "TableRect",
    "Throttle",
    "decode_cloud",
    "default_rig",
    "deproject",
    "encode_cloud",
    "fuse",
    "pack_primitives",
    "render",
    "render_arrays_backend",
    "scene_primitives",
    "to_world",
]
