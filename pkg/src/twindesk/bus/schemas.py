"""Payload codecs for the eight wire schemas.

All multi-byte values are little-endian. Bulk pixel/point data round-trips
through numpy with explicit dtypes so encoding is bit-exact on any host.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from ..geometry import Pose
from .frames import FrameError

POINT_DTYPE = np.dtype([("xyz", "<f4", 3), ("rgb", "u1", 3), ("pad", "u1")])

GRIPPER_RELEASE = 0
GRIPPER_GRAB = 1
GRIPPER_OPEN = 2
GRIPPER_CLOSE = 3

TWIN_STATE_NAMES = ("IDLE", "TRACKING", "HOLDING", "FAULT")


@dataclass
class JointState:
    positions: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1)
        self.velocities = np.asarray(self.velocities, dtype=np.float64).reshape(-1)
        if self.positions.shape != self.velocities.shape:
            raise ValueError("positions and velocities differ in length")

    @staticmethod
    def zero(n: int) -> "JointState":
        return JointState(np.zeros(n), np.zeros(n))


@dataclass
class GripperCmd:
    kind: int  # GRIPPER_RELEASE/GRAB/OPEN/CLOSE
    opening: float = 0.0


# -- schema 1: Pose ----------------------------------------------------------

_POSE = struct.Struct("<7d")


def encode_pose(p: Pose) -> bytes:
    q = p.orientation
    return _POSE.pack(p.position[0], p.position[1], p.position[2], q[0], q[1], q[2], q[3])


def decode_pose(b: bytes) -> Pose:
    if len(b) != _POSE.size:
        raise FrameError(f"pose payload must be {_POSE.size} bytes, got {len(b)}")
    v = _POSE.unpack(b)
    return Pose(np.array(v[0:3]), np.array(v[3:7]))


# -- schema 2: JointState ----------------------------------------------------


def encode_joint_state(js: JointState) -> bytes:
    n = len(js.positions)
    if n > 255:
        raise FrameError("joint state exceeds 255 joints")
    return (
        struct.pack("<B", n)
        + js.positions.astype("<f8").tobytes()
        + js.velocities.astype("<f8").tobytes()
    )


def decode_joint_state(b: bytes) -> JointState:
    js, rest = _decode_joint_state_prefix(b)
    if rest:
        raise FrameError(f"{len(rest)} trailing bytes after joint state")
    return js


def _decode_joint_state_prefix(b: bytes) -> tuple[JointState, bytes]:
    if len(b) < 1:
        raise FrameError("empty joint state payload")
    n = b[0]
    need = 1 + 16 * n
    if len(b) < need:
        raise FrameError(f"joint state truncated: need {need} bytes, got {len(b)}")
    pos = np.frombuffer(b, dtype="<f8", count=n, offset=1).astype(np.float64)
    vel = np.frombuffer(b, dtype="<f8", count=n, offset=1 + 8 * n).astype(np.float64)
    return JointState(pos, vel), b[need:]


# -- schema 3: PointCloud ----------------------------------------------------


def pack_points(xyz: np.ndarray, rgb: np.ndarray) -> bytes:
    xyz = np.ascontiguousarray(xyz, dtype="<f4").reshape(-1, 3)
    rgb = np.ascontiguousarray(rgb, dtype="u1").reshape(-1, 3)
    if len(xyz) != len(rgb):
        raise FrameError("xyz and rgb point counts differ")
    rec = np.zeros(len(xyz), dtype=POINT_DTYPE)
    rec["xyz"] = xyz
    rec["rgb"] = rgb
    return struct.pack("<I", len(xyz)) + rec.tobytes()


def unpack_points(b: bytes) -> tuple[np.ndarray, np.ndarray]:
    if len(b) < 4:
        raise FrameError("point cloud payload shorter than its count field")
    (count,) = struct.unpack_from("<I", b, 0)
    need = 4 + count * POINT_DTYPE.itemsize
    if len(b) < need:
        have = (len(b) - 4) // POINT_DTYPE.itemsize
        raise FrameError(f"point cloud declares {count} points but carries {have}")
    if len(b) > need:
        raise FrameError(f"{len(b) - need} trailing bytes after point cloud")
    rec = np.frombuffer(b, dtype=POINT_DTYPE, count=count, offset=4)
    return rec["xyz"].copy(), rec["rgb"].copy()


# -- schema 4: Event ---------------------------------------------------------


def encode_event(obj: dict) -> bytes:
    if not isinstance(obj, dict):
        raise FrameError("event payload must be a JSON object")
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def decode_event(b: bytes) -> dict:
    try:
        obj = json.loads(b.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FrameError(f"event payload is not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FrameError("event payload must be a JSON object")
    return obj


# -- schemas 5/6: DepthFrame / ColorFrame ------------------------------------


def pack_depth(depth_mm: np.ndarray) -> bytes:
    depth_mm = np.ascontiguousarray(depth_mm, dtype="<u2")
    h, w = depth_mm.shape
    return struct.pack("<HH", w, h) + depth_mm.tobytes()


def unpack_depth(b: bytes) -> np.ndarray:
    if len(b) < 4:
        raise FrameError("depth payload shorter than its header")
    w, h = struct.unpack_from("<HH", b, 0)
    if len(b) != 4 + 2 * w * h:
        raise FrameError(f"depth payload size mismatch for {w}x{h}")
    return np.frombuffer(b, dtype="<u2", count=w * h, offset=4).reshape(h, w).copy()


def pack_color(rgb: np.ndarray) -> bytes:
    rgb = np.ascontiguousarray(rgb, dtype="u1")
    h, w, c = rgb.shape
    if c != 3:
        raise FrameError("color frame must have 3 channels")
    return struct.pack("<HH", w, h) + rgb.tobytes()


def unpack_color(b: bytes) -> np.ndarray:
    if len(b) < 4:
        raise FrameError("color payload shorter than its header")
    w, h = struct.unpack_from("<HH", b, 0)
    if len(b) != 4 + 3 * w * h:
        raise FrameError(f"color payload size mismatch for {w}x{h}")
    return np.frombuffer(b, dtype="u1", count=3 * w * h, offset=4).reshape(h, w, 3).copy()


# -- schema 7: GripperCmd ----------------------------------------------------

_GRIP = struct.Struct("<Bf")


def encode_gripper_cmd(cmd: GripperCmd) -> bytes:
    if cmd.kind not in (GRIPPER_RELEASE, GRIPPER_GRAB, GRIPPER_OPEN, GRIPPER_CLOSE):
        raise FrameError(f"unknown gripper command kind {cmd.kind}")
    return _GRIP.pack(cmd.kind, cmd.opening)


def decode_gripper_cmd(b: bytes) -> GripperCmd:
    if len(b) != _GRIP.size:
        raise FrameError(f"gripper command payload must be {_GRIP.size} bytes")
    kind, opening = _GRIP.unpack(b)
    if kind not in (GRIPPER_RELEASE, GRIPPER_GRAB, GRIPPER_OPEN, GRIPPER_CLOSE):
        raise FrameError(f"unknown gripper command kind {kind}")
    return GripperCmd(kind, opening)


# -- schema 8: TwinState -----------------------------------------------------


@dataclass
class TwinStateMsg:
    state: int  # index into TWIN_STATE_NAMES
    joints: JointState
    pose: Pose = field(default_factory=Pose.identity)


def encode_twin_state(msg: TwinStateMsg) -> bytes:
    if not 0 <= msg.state < len(TWIN_STATE_NAMES):
        raise FrameError(f"twin state enum out of range: {msg.state}")
    return struct.pack("<B", msg.state) + encode_joint_state(msg.joints) + encode_pose(msg.pose)


def decode_twin_state(b: bytes) -> TwinStateMsg:
    if len(b) < 1:
        raise FrameError("empty twin state payload")
    state = b[0]
    if state >= len(TWIN_STATE_NAMES):
        raise FrameError(f"twin state enum out of range: {state}")
    joints, rest = _decode_joint_state_prefix(b[1:])
    return TwinStateMsg(state, joints, decode_pose(rest))
