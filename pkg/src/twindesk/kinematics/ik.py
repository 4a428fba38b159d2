"""Damped-least-squares inverse kinematics with deterministic restarts.

The damping factor adapts per step (raised when a step would increase the
residual, relaxed after accepted steps), which keeps the solver stable through
the wrist singularities of the bundled arms. Everything is deterministic:
restart configurations come from a seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import Pose, quat_from_matrix, rotation_error_vec
from .kin import _check_q, _tool_jacobian, _walk, wrap_into_limits
from .model import ArmModel

# per-step error clamps keep steps bounded far from the target
_POS_STEP = 0.2  # m
_ROT_STEP = 0.5  # rad
_ROT_WEIGHT = 0.3  # m per rad when mixing the two residuals
_TRIALS = 6  # damping escalations per iteration


@dataclass
class IKParams:
    lambda_: float = 0.05
    tol_pos: float = 1e-3  # m
    tol_rot: float = math.radians(0.5)
    max_iters: int = 200
    restarts: int = 7  # extra attempts from seeded random configs
    seed: int = 0


class Unreachable(Exception):
    def __init__(self, best_pos_err: float, best_rot_err: float):
        self.best_pos_err = best_pos_err
        self.best_rot_err = best_rot_err
        super().__init__(
            f"IK did not converge (best position error {best_pos_err:.6f} m, "
            f"orientation error {math.degrees(best_rot_err):.3f} deg)"
        )


def _eval(arm: ArmModel, q, tp, tq):
    axes, pivots, p_tool, r_tool = _walk(arm, q)
    e_pos = tp - p_tool
    e_rot = rotation_error_vec(tq, quat_from_matrix(r_tool))
    return axes, pivots, p_tool, e_pos, e_rot


def _solve_from(arm: ArmModel, q0: np.ndarray, tp, tq, p: IKParams):
    q = q0.copy()
    lam = p.lambda_
    eye6 = np.eye(6)
    best = (math.inf, math.inf)

    axes, pivots, p_tool, e_pos, e_rot = _eval(arm, q, tp, tq)
    for _ in range(p.max_iters):
        pos_err = math.sqrt(float(e_pos @ e_pos))
        rot_err = math.sqrt(float(e_rot @ e_rot))
        cur = pos_err + _ROT_WEIGHT * rot_err
        if cur < best[0] + _ROT_WEIGHT * best[1]:
            best = (pos_err, rot_err)
        if pos_err < p.tol_pos and rot_err < p.tol_rot:
            return q, best

        jac = _tool_jacobian(arm.n, axes, pivots, p_tool)
        ep = e_pos if pos_err <= _POS_STEP else e_pos * (_POS_STEP / pos_err)
        er = e_rot if rot_err <= _ROT_STEP else e_rot * (_ROT_STEP / rot_err)
        e = np.concatenate([ep, er])

        fallback = None
        accepted = False
        for _trial in range(_TRIALS):
            dq = jac.T @ np.linalg.solve(jac @ jac.T + lam * lam * eye6, e)
            q_try = wrap_into_limits(arm, q + dq)
            state = _eval(arm, q_try, tp, tq)
            cand = math.sqrt(float(state[3] @ state[3])) + _ROT_WEIGHT * math.sqrt(
                float(state[4] @ state[4])
            )
            if cand < cur:
                q = q_try
                axes, pivots, p_tool, e_pos, e_rot = state
                lam = max(p.lambda_, 0.5 * lam)
                accepted = True
                break
            if fallback is None or cand < fallback[0]:
                fallback = (cand, q_try, state)
            lam = min(lam * 4.0, 1e3)
        if not accepted:
            # plateau: take the least-bad probe and re-relax the damping so
            # the next iteration probes fresh step sizes
            _, q, state = fallback
            axes, pivots, p_tool, e_pos, e_rot = state
            lam = p.lambda_
    return None, best


def ik_dls(arm: ArmModel, q0, target: Pose, params: IKParams | None = None) -> np.ndarray:
    """Joint vector whose fk matches target within tolerance, or Unreachable."""
    p = params or IKParams()
    q0 = _check_q(arm, q0)
    dist = float(np.linalg.norm(target.position))
    if dist > arm.total_reach:
        raise Unreachable(dist - arm.total_reach, math.inf)

    c = arm.chain
    rng = np.random.default_rng(p.seed)
    tp = np.asarray(target.position, dtype=float)
    tq = np.asarray(target.orientation, dtype=float)
    best = (math.inf, math.inf)
    start = q0
    for _attempt in range(1 + p.restarts):
        q, attempt_best = _solve_from(arm, start, tp, tq, p)
        if q is not None:
            return q
        if attempt_best[0] + _ROT_WEIGHT * attempt_best[1] < best[0] + _ROT_WEIGHT * best[1]:
            best = attempt_best
        start = rng.uniform(c.lo, c.hi)
    raise Unreachable(*best)
