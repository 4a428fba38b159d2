"""Single-process assembly: twin loop, scene, sensors, recording, autopilot.

One simulation loop owns everything; all cross-stage traffic flows through
the bus, so an external client and the scripted operator are interchangeable.
Simulation time is the only clock; wall pacing is opt-in.
"""

from __future__ import annotations

import time

import numpy as np

from ..bus import Bus, SubscriptionMode, schemas
from ..kinematics import load_arm
from ..rgbd import SensorStage, scene_primitives
from ..scene import (
    PRACTICE,
    TRIAL,
    SessionClock,
    apply_gripper_command,
    geometry_snapshot,
    session_tick,
    spawn_layout,
)
from ..scene import step as scene_step
from ..twinloop import TwinLoop
from .autopilot import ScriptedOperator
from .config import AppConfig, config_hash, from_dict
from .recording import SessionRecorder, make_header


class App:
    def __init__(
        self,
        config: AppConfig | None = None,
        cameras: bool = True,
        log_path: str | None = None,
        operator=None,
    ):
        self.config = config or from_dict({})
        cfg = self.config
        self.dt = cfg.dt
        self.t = 0.0
        self.bus = Bus(clock=lambda: int(round(self.t * 1e9)))

        self.arm = load_arm(cfg.robot)
        self.world = spawn_layout(cfg.task)
        start_phase = PRACTICE if cfg.practice_len > 0 else TRIAL
        self.clock = SessionClock(cfg.practice_len, cfg.trial_len, phase=start_phase)

        self._pending_fingers: list[tuple[int, float]] = []
        self.twin = TwinLoop(
            self.arm,
            self.bus,
            dt=self.dt,
            workspace=cfg.workspace,
            executor=cfg.executor(),
            max_opening=cfg.task.max_opening,
            finger_hook=lambda kind, opening, t: self._pending_fingers.append((kind, opening)),
            phase_fn=lambda: self.clock.phase,
        )
        self.stage = (
            SensorStage(cfg.rig, self.bus, cfg.stride, cfg.throttle_period) if cameras else None
        )
        self.operator = operator

        header = make_header(config_hash(cfg.raw), cfg.robot)
        self.recorder = SessionRecorder(log_path if log_path is not None else cfg.log_path, header)
        self._event_sub = self.bus.subscribe("/world/events", SubscriptionMode.queued(256))

        self.towers = 0
        self._rev = 0
        self._prev_real = self.twin.real_q.copy()
        self._stop = False
        self._closed = False

    # ------------------------------------------------------------- loop

    def tick(self) -> None:
        self.t += self.dt
        if self.operator is not None:
            self.operator.step(self.t)

        st = self.twin.tick()
        self.world.gripper_pose = st.twin_pose

        changed = not np.array_equal(st.real_q, self._prev_real)
        self._prev_real = st.real_q.copy()

        events = []
        for kind, opening in self._pending_fingers:
            _, evs = apply_gripper_command(
                self.world, kind, opening, self.config.task, self.t, self.clock.phase
            )
            events.extend(evs)
        self._pending_fingers.clear()
        events.extend(scene_step(self.world, self.dt, self.config.task, self.t, self.clock.phase))
        events.extend(session_tick(self.clock, self.dt))
        for ev in events:
            self.bus.publish("/world/events", 4, schemas.encode_event(ev.as_dict()))
        if events:
            changed = True

        for env in self._event_sub.poll():
            event = schemas.decode_event(env.payload)
            if event["type"] == "tower_complete":
                self.towers += 1
            self.recorder.record(event)

        snap = geometry_snapshot(self.world, self.config.task)
        snap["t"] = self.t
        snap["towers"] = self.towers
        self.bus.publish("/world/geometry", 4, schemas.encode_event(snap))
        self.bus.publish("/session/clock", 4, schemas.encode_event(self._clock_sample()))

        if self.stage is not None:
            if changed:
                self._rev += 1
            prims = scene_primitives(self.world, self.arm, st.real_q, self.config.task)
            self.stage.maybe_capture(self.t, self._rev, prims)

    def _clock_sample(self) -> dict:
        clk = self.clock
        if clk.phase == PRACTICE:
            end = clk.practice_len
        elif clk.phase == TRIAL:
            end = clk.practice_len + clk.trial_len
        else:
            end = clk.elapsed
        return {
            "t": self.t,
            "phase": clk.phase,
            "remaining": max(0.0, end - clk.elapsed),
        }

    def run(self, duration: float | None, realtime: bool = False) -> None:
        """Tick until `duration` sim seconds elapse (None = until stopped)."""
        wall0 = time.monotonic()
        t0 = self.t
        while not self._stop and (duration is None or self.t < t0 + duration - 1e-9):
            self.tick()
            if realtime:
                lag = (self.t - t0) - (time.monotonic() - wall0)
                if lag > 0:
                    time.sleep(lag)

    def request_stop(self) -> None:
        self._stop = True

    @property
    def stopped(self) -> bool:
        return self._stop

    def close(self, reason: str = "complete") -> None:
        if self._closed:
            return
        self._closed = True
        self.bus.publish(
            "/world/events",
            4,
            schemas.encode_event(
                {"t": self.t, "type": "shutdown", "detail": {"reason": reason, "phase": self.clock.phase}}
            ),
        )
        for env in self._event_sub.poll():
            self.recorder.record(schemas.decode_event(env.payload))
        self.recorder.close()
        self.bus.shutdown()


def run_autopilot(
    config: AppConfig | None = None,
    duration: float = 60.0,
    seed: int = 0,
    cameras: bool = False,
    log_path: str | None = None,
) -> App:
    """Drive a full session with the scripted operator; returns the closed app.

    Cameras default off here: the scored outcome (the event log) does not
    depend on sensor frames, and full-resolution rendering dominates runtime.
    """
    app = App(config, cameras=cameras, log_path=log_path)
    app.operator = ScriptedOperator(app.bus, app.config.task, seed=seed)
    try:
        app.run(duration)
    finally:
        app.close()
    return app
