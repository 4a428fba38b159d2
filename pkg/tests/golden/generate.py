"""Regenerate the golden wire-format fixtures.

Run from the repo root:  python3 tests/golden/generate.py

The .bin files are frozen reference frames; both the Python codec tests and
the web console's decoder tests must reproduce them byte for byte. Values
are hand-picked: every float is exactly representable at its wire precision
except the one noted f32 rounding probe, so the manifest's JSON numbers are
exact expectations.
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[2] / "src"))

from twindesk.bus import Envelope, encode_frame  # noqa: E402
from twindesk.bus import schemas  # noqa: E402
from twindesk.geometry import Pose  # noqa: E402

HERE = pathlib.Path(__file__).parent


def emit(name, topic, schema_id, ts, payload, expect):
    env = Envelope(topic, schema_id, ts, payload)
    (HERE / f"{name}.bin").write_bytes(encode_frame(env))
    return {
        "file": f"{name}.bin",
        "topic": topic,
        "schema_id": schema_id,
        "timestamp_ns": ts,
        "payload_len": len(payload),
        "expect": expect,
    }


def main():
    entries = []

    pos = [0.38, -0.12, 0.25]
    ori = [0.92387953251128674, 0.0, 0.38268343236508978, 0.0]
    entries.append(
        emit(
            "pose",
            "/gripper/goal",
            1,
            1_234_567_890,
            schemas.encode_pose(Pose(np.array(pos), np.array(ori))),
            {"position": pos, "orientation": ori},
        )
    )

    q = [0.0, -1.5, 0.75, 3.125, -0.0625, 2.0]
    v = [0.5, 0.0, -0.25, 1.0, 0.125, -2.5]
    entries.append(
        emit(
            "joint_state",
            "/robot/joint_states",
            2,
            987_654_321_000,
            schemas.encode_joint_state(schemas.JointState(np.array(q), np.array(v))),
            {"positions": q, "velocities": v},
        )
    )

    xyz = [
        [0.5, -0.25, 1.5],
        [12.625, 0.0, -3.75],
        [0.10000000149011612, 0.2, 0.30000001192092896],  # f32 rounding probe
        [-1.0, -2.0, -3.0],
        [0.0, 0.0, 0.0],
    ]
    rgb = [[255, 0, 0], [0, 255, 0], [0, 0, 255], [196, 196, 200], [1, 2, 3]]
    xyz32 = np.array(xyz, dtype=np.float32)
    entries.append(
        emit(
            "cloud",
            "/cloud/fused",
            3,
            55_000_000_000,
            schemas.pack_points(xyz32, np.array(rgb, dtype=np.uint8)),
            {
                "count": 5,
                "xyz": [[float(c) for c in row] for row in xyz32],
                "rgb": rgb,
            },
        )
    )
    entries.append(
        emit(
            "cloud_empty",
            "/cloud/fused",
            3,
            55_100_000_000,
            schemas.pack_points(np.zeros((0, 3), np.float32), np.zeros((0, 3), np.uint8)),
            {"count": 0, "xyz": [], "rgb": []},
        )
    )

    event = {"t": 12.34, "type": "pick", "detail": {"cube": "a", "phase": "TRIAL"}}
    entries.append(
        emit(
            "event",
            "/world/events",
            4,
            12_340_000_000,
            schemas.encode_event(event),
            {"json": event},
        )
    )

    depth = np.array([[0, 1, 2, 65535], [1000, 1500, 0, 3], [7, 8, 9, 10]], dtype=np.uint16)
    entries.append(
        emit(
            "depth",
            "/cam/cam0/depth",
            5,
            66_000_000_000,
            schemas.pack_depth(depth),
            {"width": 4, "height": 3, "data": [int(x) for x in depth.ravel()]},
        )
    )

    color = np.arange(36, dtype=np.uint8).reshape(3, 4, 3)
    entries.append(
        emit(
            "color",
            "/cam/cam0/color",
            6,
            66_000_000_001,
            schemas.pack_color(color),
            {"width": 4, "height": 3, "data": [int(x) for x in color.ravel()]},
        )
    )

    entries.append(
        emit(
            "gripper_grab",
            "/gripper/cmd",
            7,
            70_000_000_000,
            schemas.encode_gripper_cmd(schemas.GripperCmd(schemas.GRIPPER_GRAB, 0.0)),
            {"kind": 1, "opening": 0.0},
        )
    )
    entries.append(
        emit(
            "gripper_open",
            "/gripper/cmd",
            7,
            70_000_000_001,
            schemas.encode_gripper_cmd(schemas.GripperCmd(schemas.GRIPPER_OPEN, 0.0625)),
            {"kind": 2, "opening": 0.0625},
        )
    )

    twin_q = [0.125, -0.5, 1.0, 0.25, -1.25, 0.0625]
    twin_v = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    twin_pos = [0.4, 0.0, 0.125]
    twin_ori = [0.0, 0.0, 1.0, 0.0]
    entries.append(
        emit(
            "twin_state",
            "/twin/state",
            8,
            80_000_000_000,
            schemas.encode_twin_state(
                schemas.TwinStateMsg(
                    1,
                    schemas.JointState(np.array(twin_q), np.array(twin_v)),
                    Pose(np.array(twin_pos), np.array(twin_ori)),
                )
            ),
            {
                "state": 1,
                "state_name": "TRACKING",
                "joints": {"positions": twin_q, "velocities": twin_v},
                "pose": {"position": twin_pos, "orientation": twin_ori},
            },
        )
    )

    manifest = {"frame_overhead_bytes": 20, "entries": entries}
    (HERE / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(entries)} fixtures to {HERE}")


if __name__ == "__main__":
    main()
