"""Serial-arm description loading and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..geometry import Transform, quat_normalize

_JOINT_KEYS = {"axis", "origin", "limits", "vel_limit"}
_ORIGIN_KEYS = {"xyz", "quat"}
_TOP_KEYS = {"name", "joints", "tool_offset"}

UNIT_TOL = 1e-9


class ArmDescriptionError(ValueError):
    pass


@dataclass(frozen=True)
class JointSpec:
    axis: np.ndarray  # unit vector in the parent frame
    origin: Transform  # parent frame -> joint frame, applied before rotation
    limits: tuple[float, float]
    vel_limit: float


@dataclass(frozen=True)
class ChainArrays:
    """Per-joint constants flattened for the FK/Jacobian hot path."""

    origin_t: np.ndarray  # (n, 3)
    origin_r: np.ndarray  # (n, 3, 3)
    axis: np.ndarray  # (n, 3)
    tool_t: np.ndarray
    tool_r: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    # the same constants as plain float tuples; the chain walk runs once per
    # IK trial step, where numpy dispatch on 3x3 operands dominates the cost
    flat: tuple  # per joint: (tx, ty, tz, r00..r22 row-major, ax, ay, az)
    tool_flat: tuple  # (tx, ty, tz, r00..r22 row-major)


@dataclass(frozen=True)
class ArmModel:
    name: str
    joints: tuple[JointSpec, ...]
    tool_offset: Transform

    @property
    def n(self) -> int:
        return len(self.joints)

    @property
    def chain(self) -> ChainArrays:
        cached = self.__dict__.get("_chain")
        if cached is None:
            cached = ChainArrays(
                origin_t=np.array([j.origin.t for j in self.joints]),
                origin_r=np.array([j.origin.rotation_matrix() for j in self.joints]),
                axis=np.array([j.axis for j in self.joints]),
                tool_t=self.tool_offset.t.copy(),
                tool_r=self.tool_offset.rotation_matrix(),
                lo=np.array([j.limits[0] for j in self.joints]),
                hi=np.array([j.limits[1] for j in self.joints]),
                flat=tuple(
                    (
                        *j.origin.t.tolist(),
                        *[v for row in j.origin.rotation_matrix().tolist() for v in row],
                        *j.axis.tolist(),
                    )
                    for j in self.joints
                ),
                tool_flat=(
                    *self.tool_offset.t.tolist(),
                    *[v for row in self.tool_offset.rotation_matrix().tolist() for v in row],
                ),
            )
            object.__setattr__(self, "_chain", cached)
        return cached

    @property
    def total_reach(self) -> float:
        reach = sum(float(np.linalg.norm(j.origin.t)) for j in self.joints)
        return reach + float(np.linalg.norm(self.tool_offset.t))

    def limits_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([j.limits[0] for j in self.joints])
        hi = np.array([j.limits[1] for j in self.joints])
        return lo, hi

    def vel_limits(self) -> np.ndarray:
        return np.array([j.vel_limit for j in self.joints])


def _parse_transform(obj, where: str) -> Transform:
    if not isinstance(obj, dict) or set(obj) != _ORIGIN_KEYS:
        raise ArmDescriptionError(f"{where}: expected {{xyz, quat}}")
    xyz = np.asarray(obj["xyz"], dtype=float)
    quat = np.asarray(obj["quat"], dtype=float)
    if xyz.shape != (3,) or quat.shape != (4,):
        raise ArmDescriptionError(f"{where}: xyz must be length 3, quat length 4")
    norm = float(np.linalg.norm(quat))
    if abs(norm - 1.0) > 1e-6:
        raise ArmDescriptionError(f"{where}: quaternion norm {norm} not 1")
    return Transform(xyz, quat_normalize(quat))


def parse_arm(description: dict) -> ArmModel:
    if not isinstance(description, dict):
        raise ArmDescriptionError("arm description must be a JSON object")
    extra = set(description) - _TOP_KEYS
    missing = _TOP_KEYS - set(description)
    if extra or missing:
        raise ArmDescriptionError(
            f"arm description keys: missing {sorted(missing)}, unknown {sorted(extra)}"
        )
    name = description["name"]
    if not isinstance(name, str) or not name:
        raise ArmDescriptionError("name must be a non-empty string")

    joints = []
    raw_joints = description["joints"]
    if not isinstance(raw_joints, list) or len(raw_joints) < 2:
        raise ArmDescriptionError("an arm needs at least 2 joints")
    for i, j in enumerate(raw_joints):
        where = f"joints[{i}]"
        if not isinstance(j, dict) or set(j) != _JOINT_KEYS:
            raise ArmDescriptionError(f"{where}: expected keys {sorted(_JOINT_KEYS)}")
        axis = np.asarray(j["axis"], dtype=float)
        if axis.shape != (3,):
            raise ArmDescriptionError(f"{where}: axis must be a 3-vector")
        if abs(float(np.linalg.norm(axis)) - 1.0) > UNIT_TOL:
            raise ArmDescriptionError(f"{where}: axis {axis.tolist()} is not unit length")
        limits = j["limits"]
        if (
            not isinstance(limits, list)
            or len(limits) != 2
            or not all(isinstance(x, (int, float)) for x in limits)
        ):
            raise ArmDescriptionError(f"{where}: limits must be [min, max]")
        lo, hi = float(limits[0]), float(limits[1])
        if not lo < hi:
            raise ArmDescriptionError(f"{where}: limits min {lo} must be < max {hi}")
        vel = j["vel_limit"]
        if not isinstance(vel, (int, float)) or not vel > 0:
            raise ArmDescriptionError(f"{where}: vel_limit must be > 0")
        joints.append(
            JointSpec(axis, _parse_transform(j["origin"], where + ".origin"), (lo, hi), float(vel))
        )

    tool = _parse_transform(description["tool_offset"], "tool_offset")
    arm = ArmModel(name, tuple(joints), tool)
    if not np.isfinite(arm.total_reach) or arm.total_reach <= 0:
        raise ArmDescriptionError("total reach must be finite and positive")
    return arm


def load_arm(source) -> ArmModel:
    """Accepts a bundled arm name ("arm6", "arm7"), a filesystem path, or a
    parsed description dict."""
    if isinstance(source, dict):
        return parse_arm(source)
    source = str(source)
    if "/" not in source and not source.endswith(".json"):
        ref = resources.files(__package__) / "arms" / f"{source}.json"
        if not ref.is_file():
            raise ArmDescriptionError(f"no bundled arm named {source!r}")
        return parse_arm(json.loads(ref.read_text()))
    with open(source) as f:
        return parse_arm(json.load(f))
