"""Closed-loop twin: goal intake, planning, a latency/fault-injected executor,
and the mirrored state stream.

The "real" arm is the planned sample stream delayed by a fixed number of
ticks; faults reshape that stream (stall freezes it, deviate offsets it). The
published twin pose is always fk(real_q): the twin renders reality, never the
plan.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bus import Bus, SubscriptionMode, schemas
from .geometry import Pose
from .kinematics import ArmModel, IKParams, JointTrajectory, Unreachable, fk, ik_dls
from .kinematics import plan_joint_trajectory
from .scene import TRIAL, SessionEvent

IDLE = "IDLE"
TRACKING = "TRACKING"
HOLDING = "HOLDING"
FAULT = "FAULT"

MODE_CODES = {IDLE: 0, TRACKING: 1, HOLDING: 2, FAULT: 3}

GOAL_INTAKE_PERIOD = 0.02  # 50 Hz latest-wins intake


@dataclass(frozen=True)
class WorkspaceBox:
    min_xyz: np.ndarray
    max_xyz: np.ndarray

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.min_xyz) and np.all(p <= self.max_xyz))

    @staticmethod
    def of(min_xyz, max_xyz) -> "WorkspaceBox":
        lo = np.asarray(min_xyz, dtype=float)
        hi = np.asarray(max_xyz, dtype=float)
        if lo.shape != (3,) or hi.shape != (3,) or np.any(lo >= hi):
            raise ValueError("workspace box needs min < max on all axes")
        return WorkspaceBox(lo, hi)


DEFAULT_WORKSPACE = WorkspaceBox.of((0.08, -0.45, 0.0), (0.70, 0.45, 0.50))


@dataclass
class FaultWindow:
    at: float
    kind: str  # "stall" or "deviate"
    duration: float
    magnitude: float = 0.0  # rad, deviate only

    def active(self, t: float) -> bool:
        return self.at <= t < self.at + self.duration


@dataclass
class ExecutorConfig:
    latency: float = 0.100
    fault_plan: list[FaultWindow] = field(default_factory=list)

    def validate(self) -> "ExecutorConfig":
        if self.latency < 0:
            raise ValueError("latency must be >= 0")
        plan = sorted(self.fault_plan, key=lambda w: w.at)
        for w in plan:
            if w.kind not in ("stall", "deviate"):
                raise ValueError(f"unknown fault kind {w.kind!r}")
            if w.duration <= 0:
                raise ValueError("fault duration must be positive")
        for a, b in zip(plan, plan[1:]):
            if a.at + a.duration > b.at:
                raise ValueError("fault windows overlap")
        return self


@dataclass(frozen=True)
class TwinState:
    mode: str
    planned_q: np.ndarray
    real_q: np.ndarray
    twin_pose: Pose
    divergence: float


@dataclass(frozen=True)
class GoalResult:
    accepted: bool
    reason: Optional[str] = None  # outside_workspace | unreachable | not_tracking

    def __bool__(self):
        return self.accepted


ACCEPTED = GoalResult(True)


class TwinLoop:
    def __init__(
        self,
        arm: ArmModel,
        bus: Bus,
        home_q=None,
        dt: float = 0.01,
        workspace: WorkspaceBox = DEFAULT_WORKSPACE,
        executor: ExecutorConfig | None = None,
        ik_params: IKParams | None = None,
        a_max: float = 4.0,
        max_opening: float = 0.085,
        finger_hook: Optional[Callable[[int, float, float], None]] = None,
        phase_fn: Callable[[], str] = lambda: TRIAL,
    ):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.arm = arm
        self.bus = bus
        self.dt = dt
        self.workspace = workspace
        self.executor = (executor or ExecutorConfig()).validate()
        self.ik_params = ik_params or IKParams()
        self.a_max = a_max
        self.max_opening = max_opening
        self.finger_hook = finger_hook
        self.phase_fn = phase_fn

        self.home_q = (
            np.zeros(arm.n) if home_q is None else np.asarray(home_q, dtype=float).copy()
        )
        if self.home_q.shape != (arm.n,):
            raise ValueError("home_q length mismatch")

        # ticks of delay between a planned sample and the executor acting on it
        self.latency_ticks = math.ceil(self.executor.latency / dt - 1e-9)

        self.mode = IDLE
        self.t = 0.0
        self.planned_q = self.home_q.copy()
        self.real_q = self.home_q.copy()
        self._prev_planned = self.home_q.copy()
        self._prev_real = self.home_q.copy()
        self._traj: Optional[JointTrajectory] = None
        self._traj_idx = 0
        self._line: deque[np.ndarray] = deque(maxlen=self.latency_ticks + 1)
        for _ in range(self.latency_ticks + 1):
            self._line.append(self.home_q.copy())
        self._fault_plan = list(self.executor.fault_plan)
        self._faulted_once: set[int] = set()
        self._next_goal_time = 0.0
        self._pending_goal = None

        self._goal_sub = bus.subscribe("/gripper/goal", SubscriptionMode.latest())
        self._cmd_sub = bus.subscribe("/gripper/cmd", SubscriptionMode.queued(64))

    # ------------------------------------------------------------- events

    def _emit(self, kind: str, detail: dict) -> None:
        detail = dict(detail)
        detail.setdefault("phase", self.phase_fn())
        ev = SessionEvent(self.t, kind, detail)
        self.bus.publish("/world/events", 4, schemas.encode_event(ev.as_dict()))

    # ------------------------------------------------------------- goals

    def set_goal(self, pose: Pose) -> GoalResult:
        """Accept a tracking goal: replan from the current planned_q."""
        if self.mode != TRACKING:
            return GoalResult(False, "not_tracking")
        if not self.workspace.contains(pose.position):
            self._emit("goal_rejected", {"reason": "outside_workspace"})
            return GoalResult(False, "outside_workspace")
        try:
            q_goal = ik_dls(self.arm, self.planned_q, pose, self.ik_params)
        except Unreachable:
            self._emit("goal_rejected", {"reason": "unreachable"})
            return GoalResult(False, "unreachable")
        self._traj = plan_joint_trajectory(
            self.arm, self.planned_q, q_goal, dt=self.dt, a_max=self.a_max
        )
        self._traj_idx = 0
        return ACCEPTED

    # ------------------------------------------------------------- commands

    def handle_gripper_cmd(self, cmd: schemas.GripperCmd) -> None:
        if cmd.kind == schemas.GRIPPER_GRAB:
            if self.mode == FAULT:
                self._emit("fault", {"warning": "grab_ignored_in_fault"})
                return
            if self.mode in (IDLE, HOLDING):
                self.mode = TRACKING
                self._emit("grab", {"mode": TRACKING})
            return
        if cmd.kind == schemas.GRIPPER_RELEASE:
            if self.mode == TRACKING:
                self.mode = HOLDING
                self._emit("release", {"mode": HOLDING})
            return
        # finger motion: clamp and forward; the scene decides what happens
        opening = min(max(float(cmd.opening), 0.0), self.max_opening)
        if self.finger_hook is not None:
            self.finger_hook(cmd.kind, opening, self.t)

    # ------------------------------------------------------------- faults

    def inject_fault(self, kind: str, duration: float, magnitude: float = 0.0) -> None:
        """Schedule a fault window starting at the current sim time."""
        self._fault_plan.append(FaultWindow(self.t, kind, duration, magnitude))

    def _active_fault(self) -> Optional[FaultWindow]:
        for i, w in enumerate(self._fault_plan):
            if w.active(self.t):
                if i not in self._faulted_once:
                    self._faulted_once.add(i)
                    self.mode = FAULT
                    self._emit(
                        "fault",
                        {"kind": w.kind, "at": w.at, "duration": w.duration},
                    )
                return w
        return None

    # ------------------------------------------------------------- tick

    def _drain_inputs(self) -> None:
        for env in self._cmd_sub.poll():
            self.handle_gripper_cmd(schemas.decode_gripper_cmd(env.payload))
        goals = self._goal_sub.poll()
        if goals:
            self._pending_goal = goals[-1]
        if self._pending_goal is not None and self.t >= self._next_goal_time:
            self._next_goal_time = self.t + GOAL_INTAKE_PERIOD
            env = self._pending_goal
            self._pending_goal = None
            self.set_goal(schemas.decode_pose(env.payload))

    def tick(self, dt: Optional[float] = None) -> TwinState:
        dt = self.dt if dt is None else dt
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.t += dt
        self._drain_inputs()

        if self._traj is not None and self._traj_idx < len(self._traj) - 1:
            self._traj_idx += 1
            self.planned_q = self._traj.at_index(self._traj_idx).copy()

        self._line.append(self.planned_q.copy())
        delayed = self._line[0]

        fault = self._active_fault()
        if fault is None:
            self.real_q = delayed.copy()
        elif fault.kind == "stall":
            pass  # frozen: the delay line keeps moving, samples are dropped
        else:  # deviate
            self.real_q = delayed + fault.magnitude

        twin_pose = fk(self.arm, self.real_q)
        divergence = float(np.max(np.abs(self.planned_q - self.real_q)))

        plan_vel = (self.planned_q - self._prev_planned) / dt
        real_vel = (self.real_q - self._prev_real) / dt
        self._prev_planned = self.planned_q.copy()
        self._prev_real = self.real_q.copy()

        real_js = schemas.JointState(self.real_q.copy(), real_vel)
        self.bus.publish(
            "/plan/joint_states",
            2,
            schemas.encode_joint_state(schemas.JointState(self.planned_q.copy(), plan_vel)),
        )
        self.bus.publish("/robot/joint_states", 2, schemas.encode_joint_state(real_js))
        self.bus.publish(
            "/twin/state",
            8,
            schemas.encode_twin_state(
                schemas.TwinStateMsg(MODE_CODES[self.mode], real_js, twin_pose)
            ),
        )
        return TwinState(
            self.mode, self.planned_q.copy(), self.real_q.copy(), twin_pose, divergence
        )

    # ------------------------------------------------------------- reset

    def reset(self) -> None:
        """Back to IDLE at home; discards playback and pending fault windows."""
        self.mode = IDLE
        self.planned_q = self.home_q.copy()
        self.real_q = self.home_q.copy()
        self._prev_planned = self.home_q.copy()
        self._prev_real = self.home_q.copy()
        self._traj = None
        self._traj_idx = 0
        self._line.clear()
        for _ in range(self.latency_ticks + 1):
            self._line.append(self.home_q.copy())
        self._fault_plan = []
        self._faulted_once = set()
        self._pending_goal = None
