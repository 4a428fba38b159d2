"""The .bin fixtures are the frozen wire format: decode must reproduce the
manifest expectations and re-encode must reproduce the files byte for byte.
The web console's decoder runs against the same files."""

import json
import pathlib

import numpy as np
import pytest

from twindesk.bus import Envelope, decode_frame, encode_frame, schemas

GOLDEN = pathlib.Path(__file__).parent / "golden"
MANIFEST = json.loads((GOLDEN / "manifest.json").read_text())
ENTRIES = MANIFEST["entries"]


@pytest.mark.parametrize("entry", ENTRIES, ids=[e["file"] for e in ENTRIES])
def test_golden_frame_decodes_and_reencodes(entry):
    blob = (GOLDEN / entry["file"]).read_bytes()
    env, rest = decode_frame(blob)
    assert rest == b""
    assert env.topic == entry["topic"]
    assert env.schema_id == entry["schema_id"]
    assert env.timestamp_ns == entry["timestamp_ns"]
    assert len(env.payload) == entry["payload_len"]
    assert len(blob) == 20 + len(entry["topic"].encode()) + len(env.payload)
    assert encode_frame(env) == blob


def by_name(name) -> tuple[Envelope, dict]:
    entry = next(e for e in ENTRIES if e["file"] == f"{name}.bin")
    env, _ = decode_frame((GOLDEN / entry["file"]).read_bytes())
    return env, entry["expect"]


def test_golden_pose_values():
    env, expect = by_name("pose")
    p = schemas.decode_pose(env.payload)
    assert list(p.position) == expect["position"]
    assert list(p.orientation) == expect["orientation"]


def test_golden_joint_state_values():
    env, expect = by_name("joint_state")
    js = schemas.decode_joint_state(env.payload)
    assert list(js.positions) == expect["positions"]
    assert list(js.velocities) == expect["velocities"]


def test_golden_cloud_values():
    env, expect = by_name("cloud")
    xyz, rgb = schemas.unpack_points(env.payload)
    assert len(xyz) == expect["count"]
    assert [[float(c) for c in row] for row in xyz] == expect["xyz"]
    assert [[int(c) for c in row] for row in rgb] == expect["rgb"]
    # 20 bytes per point on the wire: 4B count amortized aside, 16B record
    assert len(env.payload) == 4 + 16 * expect["count"]


def test_golden_empty_cloud():
    env, expect = by_name("cloud_empty")
    xyz, rgb = schemas.unpack_points(env.payload)
    assert len(xyz) == 0 and len(rgb) == 0
    assert expect["count"] == 0


def test_golden_event_values():
    env, expect = by_name("event")
    assert schemas.decode_event(env.payload) == expect["json"]


def test_golden_depth_values():
    env, expect = by_name("depth")
    depth = schemas.unpack_depth(env.payload)
    assert depth.shape == (expect["height"], expect["width"])
    assert [int(x) for x in depth.ravel()] == expect["data"]


def test_golden_color_values():
    env, expect = by_name("color")
    rgb = schemas.unpack_color(env.payload)
    assert rgb.shape == (expect["height"], expect["width"], 3)
    assert [int(x) for x in rgb.ravel()] == expect["data"]


@pytest.mark.parametrize("name", ["gripper_grab", "gripper_open"])
def test_golden_gripper_values(name):
    env, expect = by_name(name)
    cmd = schemas.decode_gripper_cmd(env.payload)
    assert cmd.kind == expect["kind"]
    assert cmd.opening == expect["opening"]


def test_golden_twin_state_values():
    env, expect = by_name("twin_state")
    msg = schemas.decode_twin_state(env.payload)
    assert msg.state == expect["state"]
    assert schemas.TWIN_STATE_NAMES[msg.state] == expect["state_name"]
    assert list(msg.joints.positions) == expect["joints"]["positions"]
    assert list(msg.joints.velocities) == expect["joints"]["velocities"]
    assert list(msg.pose.position) == expect["pose"]["position"]
    assert list(msg.pose.orientation) == expect["pose"]["orientation"]


def test_generator_is_reproducible(tmp_path):
    import shutil
    import subprocess
    import sys

    work = tmp_path / "golden"
    shutil.copytree(GOLDEN, work)
    subprocess.run(
        [sys.executable, str(work / "generate.py")], check=True, capture_output=True
    )
    for entry in ENTRIES:
        assert (work / entry["file"]).read_bytes() == (GOLDEN / entry["file"]).read_bytes()
