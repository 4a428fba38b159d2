"""Compare the compiled raycast kernel against the numpy fallback.

Run from the repo root after building the extension:

    python benchmarks/bench_render.py
"""

import time

import numpy as np

from twindesk.kinematics import load_arm
from twindesk.orchestrator import from_dict
from twindesk.rgbd import render, scene_primitives
from twindesk.rgbd.render import HAVE_COMPILED
from twindesk.scene import spawn_layout

REPEATS = 5


def time_backend(name, prims, rig):
    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        for cam in rig:
            render(prims, cam.intrinsics, cam.extrinsics, backend=name)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    cfg = from_dict({})
    world = spawn_layout(cfg.task)
    arm = load_arm(cfg.robot)
    q = np.array([0.3, -0.4, 0.5, 0.2, 0.3, 0.1])
    prims = scene_primitives(world, arm, q, cfg.task)
    n_px = sum(c.intrinsics.width * c.intrinsics.height for c in cfg.rig)
    print(f"scene: {len(prims)} primitives, rig: {len(cfg.rig)} cameras, {n_px} pixels total")

    t_np = time_backend("numpy", prims, cfg.rig)
    print(f"numpy    : {1e3 * t_np:8.1f} ms per full-rig render")
    if HAVE_COMPILED:
        t_c = time_backend("compiled", prims, cfg.rig)
        print(f"compiled : {1e3 * t_c:8.1f} ms per full-rig render  ({t_np / t_c:.1f}x)")
    else:
        print("compiled : not built (pip install -e . rebuilds it)")


if __name__ == "__main__":
    main()
