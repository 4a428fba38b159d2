"""Scripted operator: builds cube towers through the bus like a remote client.

The policy is a plain waypoint script per cube (hover above it, descend,
close, lift, carry to the target zone, descend, open) driven entirely by the
public topics: it reads /world/geometry and /twin/state, writes /gripper/goal
and /gripper/cmd, and never touches simulator internals.
"""

from __future__ import annotations

import numpy as np

from ..bus import Bus, SubscriptionMode, schemas
from ..geometry import Pose
from ..scene import SceneConfig

# tool z pointing at the table; every task waypoint is reachable this way
DOWN_QUAT = np.array([0.0, 0.0, 1.0, 0.0])

FAULT_CODE = schemas.TWIN_STATE_NAMES.index("FAULT")
TRACKING_CODE = schemas.TWIN_STATE_NAMES.index("TRACKING")


class StuckError(RuntimeError):
    """The policy made no progress past the watchdog window."""


class ScriptedOperator:
    def __init__(
        self,
        bus: Bus,
        task: SceneConfig,
        hover: float = 0.12,
        settle_tol: float = 0.004,
        watchdog: float = 10.0,
        seed: int = 0,
    ):
        self.bus = bus
        self.task = task
        self.hover = hover
        self.settle_tol = settle_tol
        self.watchdog = watchdog
        # the seed only perturbs hover heights; the waypoint order is fixed
        self._jitter = float(np.random.default_rng(seed).uniform(-0.005, 0.005))

        self._geo = bus.subscribe("/world/geometry", SubscriptionMode.latest())
        self._twin = bus.subscribe("/twin/state", SubscriptionMode.latest())
        self.phase = "grab"
        self._waypoints: list[np.ndarray] = []
        self._goal: np.ndarray | None = None
        self._geometry: dict | None = None
        self._state: schemas.TwinStateMsg | None = None
        self._progress_t = 0.0
        self._wait_until = 0.0
        self._carrying: str | None = None

    # ------------------------------------------------------------- intake

    def _poll(self) -> None:
        for env in self._geo.poll():
            self._geometry = schemas.decode_event(env.payload)
        for env in self._twin.poll():
            self._state = schemas.decode_twin_state(env.payload)

    def _advance(self, phase: str, t: float) -> None:
        self.phase = phase
        self._progress_t = t

    # ------------------------------------------------------------- helpers

    def _cubes(self) -> list[dict]:
        return self._geometry["cubes"] if self._geometry else []

    def _at_target(self, cube: dict) -> bool:
        cx, cy = self.task.center
        return bool(np.hypot(cube["pos"][0] - cx, cube["pos"][1] - cy) < 0.005)

    def _pick_next(self):
        free = [
            c
            for c in self._cubes()
            if not c["attached"] and not self._at_target(c)
        ]
        return min(free, key=lambda c: c["id"]) if free else None

    def _stack_height(self) -> int:
        return sum(1 for c in self._cubes() if self._at_target(c))

    def _send_goal(self, p: np.ndarray) -> None:
        self._goal = np.asarray(p, dtype=float)
        self.bus.publish(
            "/gripper/goal", 1, schemas.encode_pose(Pose(self._goal.copy(), DOWN_QUAT.copy()))
        )

    def _send_cmd(self, kind: int, opening: float = 0.0) -> None:
        self.bus.publish(
            "/gripper/cmd", 7, schemas.encode_gripper_cmd(schemas.GripperCmd(kind, opening))
        )

    def _arrived(self) -> bool:
        if self._state is None or self._goal is None:
            return False
        pos = np.asarray(self._state.pose.position, dtype=float)
        return bool(np.linalg.norm(pos - self._goal) < self.settle_tol)

    # ------------------------------------------------------------- stepping

    def step(self, t: float) -> None:
        """Advance the script one tick; call with the current sim time."""
        self._poll()

        if self._state is not None and self._state.state == FAULT_CODE:
            # waiting out a fault is not "stuck"; nothing useful to send
            self._progress_t = t
            return
        if t - self._progress_t > self.watchdog:
            raise StuckError(
                f"autopilot made no progress for {self.watchdog:.0f} s "
                f"(phase {self.phase!r} at t={t:.2f}, goal {self._goal})"
            )

        if self.phase == "grab":
            self._send_cmd(schemas.GRIPPER_GRAB)
            self._send_cmd(schemas.GRIPPER_OPEN, self.task.max_opening)
            self._advance("await-tracking", t)
            return

        if self.phase == "await-tracking":
            if self._state is not None and self._state.state == TRACKING_CODE:
                self._advance("select", t)
            return

        if self.phase == "select":
            if self._geometry is None:
                return
            cube = self._pick_next()
            if cube is None:
                return  # between tower completion and respawn
            x, y, z = cube["pos"]
            zh = z + self.hover + self._jitter
            level = self._stack_height()
            tx, ty = self.task.center
            tz = self.task.rest_z(level)
            self._carrying = cube["id"]
            self._waypoints = [
                np.array([x, y, zh]),  # hover over the cube
                np.array([x, y, z]),  # descend to grasp depth
                None,  # close fingers
                np.array([x, y, zh]),  # lift
                np.array([tx, ty, tz + self.hover + self._jitter]),  # carry
                np.array([tx, ty, tz]),  # descend onto the stack
                None,  # open fingers
                np.array([tx, ty, tz + self.hover]),  # retreat
            ]
            self._advance("run-script", t)
            return

        if self.phase == "run-script":
            if t < self._wait_until:
                return
            if self._goal is not None and not self._arrived():
                return
            if not self._waypoints:
                self._goal = None
                self._advance("verify", t)
                return
            wp = self._waypoints.pop(0)
            self._progress_t = t
            if wp is None:
                closing = any(w is None for w in self._waypoints)
                if closing:
                    self._send_cmd(schemas.GRIPPER_CLOSE)
                else:
                    self._send_cmd(schemas.GRIPPER_OPEN, self.task.max_opening)
                # give the scene a few ticks to settle the grasp/release
                self._wait_until = t + 0.05
            else:
                self._send_goal(wp)
            return

        if self.phase == "verify":
            # if the grasp was missed the cube is still free; just retry it
            held = [c["id"] for c in self._cubes() if c["attached"]]
            if held:
                self._send_cmd(schemas.GRIPPER_OPEN, self.task.max_opening)
                self._wait_until = t + 0.05
                return
            self._carrying = None
            self._advance("select", t)
            return
