"""Capture stage: throttled render -> frames -> fused world cloud -> bus."""

from ..bus import Bus, schemas
from .cloud import deproject, encode_cloud, fuse, to_world
from .render import render
from .throttle import Throttle


class SensorStage:
    def __init__(self, rig, bus: Bus, stride: int = 4, period: float = 0.1):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.rig = list(rig)
        self.bus = bus
        self.stride = stride
        self.throttle = Throttle(period)
        # frames are pure functions of geometry; skip re-render while static
        self._cache_rev = None
        self._cache = {}
        self.emissions = 0

    def maybe_capture(self, t: float, revision, prims) -> bool:
        """Render/publish if a throttle slot opened. Returns True on emission."""
        if not self.throttle.should_emit(t):
            return False
        if revision is None or revision != self._cache_rev:
            self._cache = {
                cam.cam_id: render(prims, cam.intrinsics, cam.extrinsics) for cam in self.rig
            }
            self._cache_rev = revision
        clouds = []
        for cam in self.rig:
            depth, rgb = self._cache[cam.cam_id]
            self.bus.publish(f"/cam/{cam.cam_id}/depth", 5, schemas.pack_depth(depth))
            self.bus.publish(f"/cam/{cam.cam_id}/color", 6, schemas.pack_color(rgb))
            pc = deproject(depth, rgb, cam.intrinsics, self.stride, timestamp=t)
            clouds.append(to_world(pc, cam.extrinsics))
        fused = fuse(clouds)
        self.bus.publish("/cloud/fused", 3, encode_cloud(fused))
        self.emissions += 1
        return True
