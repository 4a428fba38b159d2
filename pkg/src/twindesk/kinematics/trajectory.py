"""Time-synchronized trapezoidal joint trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kin import _check_q, within_limits
from .model import ArmModel

DEFAULT_DT = 0.01  # s
DEFAULT_A_MAX = 4.0  # rad/s^2


@dataclass(frozen=True)
class JointTrajectory:
    dt: float
    samples: np.ndarray  # (n_samples, n_joints)
    duration: float

    def __len__(self):
        return len(self.samples)

    def at_index(self, i: int) -> np.ndarray:
        # clamps past the end so executors can keep polling after arrival
        return self.samples[min(i, len(self.samples) - 1)]


def _min_duration(d: float, v: float, a: float) -> float:
    if d <= 0.0:
        return 0.0
    if d >= v * v / a:
        return d / v + v / a
    return 2.0 * math.sqrt(d / a)


def _position(t: float, d: float, v: float, a: float, total: float) -> float:
    # trapezoid with peak velocity v: accelerate, coast, decelerate
    ta = v / a
    if t <= 0.0:
        return 0.0
    if t >= total:
        return d
    if t < ta:
        return 0.5 * a * t * t
    if t <= total - ta:
        return 0.5 * a * ta * ta + v * (t - ta)
    r = total - t
    return d - 0.5 * a * r * r


def plan_joint_trajectory(
    arm: ArmModel,
    q_start,
    q_goal,
    dt: float = DEFAULT_DT,
    a_max: float = DEFAULT_A_MAX,
) -> JointTrajectory:
    """Per-joint trapezoidal profiles, all synchronized to the slowest joint."""
    q_start = _check_q(arm, q_start)
    q_goal = _check_q(arm, q_goal)
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not within_limits(arm, q_start, tol=1e-12):
        raise ValueError("q_start outside joint limits")
    if not within_limits(arm, q_goal, tol=1e-12):
        raise ValueError("q_goal outside joint limits")

    delta = q_goal - q_start
    dist = np.abs(delta)
    vmax = arm.vel_limits()
    total = max(
        (_min_duration(float(d), float(v), a_max) for d, v in zip(dist, vmax)),
        default=0.0,
    )
    if total == 0.0:
        return JointTrajectory(dt, q_start[None, :].copy(), 0.0)

    # re-timed peak velocity so every joint takes exactly `total`
    peaks = np.zeros(arm.n)
    for i, d in enumerate(dist):
        if d == 0.0:
            continue
        disc = a_max * a_max * total * total - 4.0 * a_max * float(d)
        peaks[i] = 0.5 * (a_max * total - math.sqrt(max(disc, 0.0)))

    times = [k * dt for k in range(int(total / dt) + 1)]
    if times[-1] < total - 1e-12:
        times.append(total)
    samples = np.empty((len(times), arm.n))
    for k, t in enumerate(times):
        for i in range(arm.n):
            x = _position(t, float(dist[i]), float(peaks[i]), a_max, total)
            samples[k, i] = q_start[i] + math.copysign(x, delta[i]) if dist[i] else q_start[i]
    samples[-1] = q_goal
    return JointTrajectory(dt, samples, total)
