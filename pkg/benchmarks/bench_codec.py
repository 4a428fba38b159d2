"""Point-cloud codec throughput check.

Budget: encode + decode of a full-frame stride-4 fused cloud from the default
two-camera rig must stay under 10 ms. Run from the repo root:

    python benchmarks/bench_codec.py
"""

import time

import numpy as np

from twindesk.kinematics import load_arm
from twindesk.orchestrator import from_dict
from twindesk.rgbd import deproject, encode_cloud, decode_cloud, fuse, render, to_world
from twindesk.rgbd import scene_primitives
from twindesk.scene import spawn_layout

REPEATS = 20
BUDGET_MS = 10.0


def main():
    cfg = from_dict({})
    world = spawn_layout(cfg.task)
    arm = load_arm(cfg.robot)
    q = np.array([0.3, -0.4, 0.5, 0.2, 0.3, 0.1])
    prims = scene_primitives(world, arm, q, cfg.task)
    clouds = []
    for cam in cfg.rig:
        depth, rgb = render(prims, cam.intrinsics, cam.extrinsics)
        pc = deproject(depth, rgb, cam.intrinsics, stride=cfg.stride)
        clouds.append(to_world(pc, cam.extrinsics))
    fused = fuse(clouds)
    print(f"fused cloud: {len(fused.xyz)} points (two cameras, stride {cfg.stride})")

    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        payload = encode_cloud(fused)
        decode_cloud(payload)
        best = min(best, time.perf_counter() - t0)
    ms = 1e3 * best
    verdict = "within" if ms < BUDGET_MS else "OVER"
    print(f"encode+decode: {ms:.2f} ms ({verdict} the {BUDGET_MS:.0f} ms budget)")


if __name__ == "__main__":
    main()
