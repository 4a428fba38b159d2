"""JSON application config: parsed, defaulted, validated; unknown keys rejected.

Defaults mirror the reference rig: 100 ms executor latency, sensor frames
every 100 ms, two 720p cameras, 100 Hz simulation tick.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from ..kinematics import load_arm
from ..rgbd import CameraIntrinsics, default_rig
from ..scene import SceneConfig
from ..twinloop import ExecutorConfig, FaultWindow, WorkspaceBox


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "robot": "arm6",
    "tick_rate": 100.0,  # Hz, simulation loop
    "latency": 0.100,  # s, executor transport delay
    "throttle_period": 0.1,  # s, sensor emission period
    "stride": 4,  # point-cloud downsampling step
    "port": 8765,  # WebSocket bridge
    "log_path": None,  # JSONL session record, None = in-memory only
    "practice_len": 0.0,  # s; human sessions would use 300
    "trial_len": 600.0,  # s
    "workspace": {"min": [0.08, -0.45, 0.0], "max": [0.70, 0.45, 0.50]},
    "task": {
        "table_height": 0.0,
        "cube_size": 0.040,
        "capture_radius": 0.020,
        "stack_tol": 0.012,
        "max_opening": 0.085,
        "triangle_base": 0.22,
        "triangle_apex": 0.19,
        "center": [0.38, 0.0],
        "table_center": [0.38, 0.0],
        "table_size": [1.0, 1.0],
    },
    "rig": {
        "width": 1280,
        "height": 720,
        "fx": 700.0,
        "fy": 700.0,
        "radius": 1.5,
        "pitch_deg": 35.0,
        "angles_deg": [120.0, 240.0],
    },
    "faults": [],  # [{"at", "kind", "duration", "magnitude"}]
}

_FAULT_KEYS = {"at", "kind", "duration", "magnitude"}

KNOWN_ROBOTS = ("arm6", "arm7")


def _merge(defaults: dict, override: dict, path: str = "") -> dict:
    out = {}
    for key, base in defaults.items():
        if key in override:
            val = override[key]
            if isinstance(base, dict):
                if not isinstance(val, dict):
                    raise ConfigError(f"{path}{key}: expected an object")
                val = _merge(base, val, f"{path}{key}.")
            out[key] = val
        else:
            out[key] = json.loads(json.dumps(base))  # deep copy of the default
    for key in override:
        if key not in defaults:
            raise ConfigError(f"unknown config key '{path}{key}'")
    return out


def _number(raw: dict, key: str, lo=None, hi=None, path: str = "") -> float:
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}{key}: expected a number, got {type(val).__name__}")
    if lo is not None and val < lo:
        raise ConfigError(f"{path}{key}: must be >= {lo}, got {val}")
    if hi is not None and val > hi:
        raise ConfigError(f"{path}{key}: must be <= {hi}, got {val}")
    return float(val)


def _positive(raw: dict, key: str, path: str = "") -> float:
    val = _number(raw, key, path=path)
    if val <= 0:
        raise ConfigError(f"{path}{key}: must be positive, got {val}")
    return val


def _vec(raw: dict, key: str, n: int, path: str = "") -> list:
    val = raw[key]
    if not isinstance(val, (list, tuple)) or len(val) != n:
        raise ConfigError(f"{path}{key}: expected a list of {n} numbers")
    return [float(v) for v in val]


@dataclass(frozen=True)
class AppConfig:
    robot: str
    tick_rate: float
    latency: float
    throttle_period: float
    stride: int
    port: int
    log_path: str | None
    practice_len: float
    trial_len: float
    workspace: WorkspaceBox
    task: SceneConfig
    rig: list
    faults: list
    raw: dict  # the fully resolved plain-JSON form, input to config_hash

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_rate

    def executor(self) -> ExecutorConfig:
        return ExecutorConfig(self.latency, list(self.faults))


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def from_dict(data: dict) -> AppConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    raw = _merge(DEFAULTS, data)

    robot = raw["robot"]
    if robot not in KNOWN_ROBOTS:
        raise ConfigError(f"robot: unknown arm {robot!r}; known: {', '.join(KNOWN_ROBOTS)}")
    load_arm(robot)  # fails loudly if the model file is missing

    tick_rate = _positive(raw, "tick_rate")
    latency = _number(raw, "latency", lo=0.0)
    throttle_period = _positive(raw, "throttle_period")
    stride = raw["stride"]
    if isinstance(stride, bool) or not isinstance(stride, int) or stride < 1:
        raise ConfigError(f"stride: must be an integer >= 1, got {stride!r}")
    port = raw["port"]
    if isinstance(port, bool) or not isinstance(port, int) or not 1 <= port <= 65535:
        raise ConfigError(f"port: must be an integer in [1, 65535], got {port!r}")
    log_path = raw["log_path"]
    if log_path is not None and not isinstance(log_path, str):
        raise ConfigError("log_path: expected a string or null")
    practice_len = _number(raw, "practice_len", lo=0.0)
    trial_len = _positive(raw, "trial_len")

    ws = raw["workspace"]
    try:
        workspace = WorkspaceBox.of(_vec(ws, "min", 3, "workspace."), _vec(ws, "max", 3, "workspace."))
    except ValueError as e:
        raise ConfigError(f"workspace: {e}") from None

    tk = raw["task"]
    task = SceneConfig(
        table_height=_number(tk, "table_height", path="task."),
        cube_size=_positive(tk, "cube_size", "task."),
        capture_radius=_positive(tk, "capture_radius", "task."),
        stack_tol=_positive(tk, "stack_tol", "task."),
        max_opening=_positive(tk, "max_opening", "task."),
        triangle_base=_positive(tk, "triangle_base", "task."),
        triangle_apex=_positive(tk, "triangle_apex", "task."),
        center=tuple(_vec(tk, "center", 2, "task.")),
        table_center=tuple(_vec(tk, "table_center", 2, "task.")),
        table_size=tuple(_vec(tk, "table_size", 2, "task.")),
    )

    rg = raw["rig"]
    width = rg["width"]
    height = rg["height"]
    for name, val in (("width", width), ("height", height)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 2:
            raise ConfigError(f"rig.{name}: must be an integer >= 2, got {val!r}")
    intrinsics = CameraIntrinsics(
        width,
        height,
        _positive(rg, "fx", "rig."),
        _positive(rg, "fy", "rig."),
        (width - 1) / 2.0,
        (height - 1) / 2.0,
    )
    angles = rg["angles_deg"]
    if not isinstance(angles, (list, tuple)) or not angles:
        raise ConfigError("rig.angles_deg: expected a non-empty list of angles")
    rig = default_rig(
        center=(task.center[0], task.center[1], task.table_height),
        radius=_positive(rg, "radius", "rig."),
        pitch_deg=_number(rg, "pitch_deg", lo=1.0, hi=89.0, path="rig."),
        angles_deg=[float(a) for a in angles],
        intrinsics=intrinsics,
    )

    faults = []
    if not isinstance(raw["faults"], list):
        raise ConfigError("faults: expected a list")
    for i, item in enumerate(raw["faults"]):
        if not isinstance(item, dict):
            raise ConfigError(f"faults[{i}]: expected an object")
        for key in item:
            if key not in _FAULT_KEYS:
                raise ConfigError(f"unknown config key 'faults[{i}].{key}'")
        if "at" not in item or "kind" not in item or "duration" not in item:
            raise ConfigError(f"faults[{i}]: needs at, kind, duration")
        faults.append(
            FaultWindow(
                float(item["at"]),
                str(item["kind"]),
                float(item["duration"]),
                float(item.get("magnitude", 0.0)),
            )
        )
    try:
        ExecutorConfig(latency, list(faults)).validate()
    except ValueError as e:
        raise ConfigError(f"faults: {e}") from None

    return AppConfig(
        robot=robot,
        tick_rate=tick_rate,
        latency=latency,
        throttle_period=throttle_period,
        stride=stride,
        port=port,
        log_path=log_path,
        practice_len=practice_len,
        trial_len=trial_len,
        workspace=workspace,
        task=task,
        rig=rig,
        faults=faults,
        raw=raw,
    )


def load_config(path) -> AppConfig:
    text = Path(path).read_text()
    if not text.strip():
        return from_dict({})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from None
    return from_dict(data)
