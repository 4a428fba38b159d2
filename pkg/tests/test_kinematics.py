import math

import numpy as np
import pytest

from twindesk.geometry import Pose, quat_angle, rotation_error_vec
from twindesk.kinematics import (
    ArmDescriptionError,
    IKParams,
    Unreachable,
    clamp_to_limits,
    fk,
    fk_frames,
    ik_dls,
    jacobian,
    load_arm,
    parse_arm,
    plan_joint_trajectory,
)

from .oracles.kinematics_reference import ref_fk


def planar_2link(tool_x=1.0):
    return parse_arm(
        {
            "name": "planar2",
            "joints": [
                {
                    "axis": [0, 0, 1],
                    "origin": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
                    "limits": [-3.2, 3.2],
                    "vel_limit": 1.0,
                },
                {
                    "axis": [0, 0, 1],
                    "origin": {"xyz": [1, 0, 0], "quat": [1, 0, 0, 0]},
                    "limits": [-3.2, 3.2],
                    "vel_limit": 1.0,
                },
            ],
            "tool_offset": {"xyz": [tool_x, 0, 0], "quat": [1, 0, 0, 0]},
        }
    )


# ---------------------------------------------------------------- model


def test_bundled_arm6_has_6_joints():
    arm = load_arm("arm6")
    assert arm.n == 6
    assert arm.name == "arm6"


def test_bundled_arm7_has_7_joints():
    arm = load_arm("arm7")
    assert arm.n == 7


def test_non_unit_axis_rejected():
    desc = {
        "name": "bad",
        "joints": [
            {
                "axis": [0, 0, 2],
                "origin": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [-1, 1],
                "vel_limit": 1.0,
            },
            {
                "axis": [0, 0, 1],
                "origin": {"xyz": [1, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [-1, 1],
                "vel_limit": 1.0,
            },
        ],
        "tool_offset": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
    }
    with pytest.raises(ArmDescriptionError):
        parse_arm(desc)


def test_min_equals_max_rejected():
    desc = {
        "name": "bad",
        "joints": [
            {
                "axis": [0, 0, 1],
                "origin": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [0.5, 0.5],
                "vel_limit": 1.0,
            },
            {
                "axis": [0, 0, 1],
                "origin": {"xyz": [1, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [-1, 1],
                "vel_limit": 1.0,
            },
        ],
        "tool_offset": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
    }
    with pytest.raises(ArmDescriptionError):
        parse_arm(desc)


def test_single_joint_rejected():
    desc = {
        "name": "bad",
        "joints": [
            {
                "axis": [0, 0, 1],
                "origin": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [-1, 1],
                "vel_limit": 1.0,
            }
        ],
        "tool_offset": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
    }
    with pytest.raises(ArmDescriptionError):
        parse_arm(desc)


def test_unknown_keys_rejected():
    arm6 = load_arm("arm6")
    desc = {
        "name": "bad",
        "joints": [
            {
                "axis": [0, 0, 1],
                "origin": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
                "limits": [-1, 1],
                "vel_limit": 1.0,
                "bogus": 1,
            },
        ]
        * 2,
        "tool_offset": {"xyz": [0, 0, 0], "quat": [1, 0, 0, 0]},
    }
    with pytest.raises(ArmDescriptionError):
        parse_arm(desc)
    assert arm6.total_reach > 0


def test_unknown_bundled_name():
    with pytest.raises(ArmDescriptionError):
        load_arm("arm99")


# ---------------------------------------------------------------- fk


def test_planar_fk_analytic():
    arm = planar_2link()
    pose = fk(arm, [0.0, 0.0])
    assert np.allclose(pose.position, [2.0, 0.0, 0.0], atol=1e-12)
    pose = fk(arm, [math.pi / 2, 0.0])
    assert np.allclose(pose.position, [0.0, 2.0, 0.0], atol=1e-12)


def test_arm6_home_pose_frozen():
    # frozen from the hand-composition reference (tests/oracles)
    pose = fk(load_arm("arm6"), np.zeros(6))
    assert np.allclose(pose.position, [0.0, 0.11235, 0.7828], atol=1e-12)
    assert np.allclose(pose.orientation, [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_arm6_spread_pose_frozen():
    q = [0.05, -0.1, 0.15, -0.2, 0.25, -0.3]
    pose = fk(load_arm("arm6"), q)
    assert np.allclose(
        pose.position, [-0.070326261349, 0.102229216530, 0.771354230409], atol=1e-10
    )
    assert np.allclose(
        pose.orientation,
        [0.963778425917, 0.014872485950, -0.221062917195, 0.148462593064],
        atol=1e-10,
    )


def test_arm7_home_pose_frozen():
    pose = fk(load_arm("arm7"), np.zeros(7))
    assert np.allclose(pose.position, [1.093235, 0.0, 0.27], atol=1e-12)
    assert np.allclose(
        pose.orientation, [0.707106781187, 0.0, 0.707106781187, 0.0], atol=1e-10
    )


def test_fk_matches_reference_on_random_configs():
    import json
    from importlib import resources

    rng = np.random.default_rng(123)
    for name in ("arm6", "arm7"):
        raw = json.loads(
            (resources.files("twindesk.kinematics") / "arms" / f"{name}.json").read_text()
        )
        arm = load_arm(name)
        lo, hi = arm.limits_arrays()
        for _ in range(50):
            q = rng.uniform(lo, hi)
            pose = fk(arm, q)
            ref_pos, ref_quat = ref_fk(raw, list(q))
            assert np.allclose(pose.position, ref_pos, atol=1e-12)
            assert np.allclose(pose.orientation, ref_quat, atol=1e-12)


def test_fk_length_mismatch():
    with pytest.raises(ValueError):
        fk(load_arm("arm6"), np.zeros(5))


def test_fk_frames_shape():
    arm = load_arm("arm6")
    frames = fk_frames(arm, np.zeros(6))
    assert len(frames) == 7
    assert np.allclose(frames[0].t, [0, 0, 0.1519])


# ---------------------------------------------------------------- jacobian


def test_planar_jacobian_analytic():
    arm = planar_2link()
    jac = jacobian(arm, [0.0, 0.0])
    assert jac[1, 0] == pytest.approx(2.0, abs=1e-12)  # dy/dq1
    assert jac[1, 1] == pytest.approx(1.0, abs=1e-12)  # dy/dq2
    assert jac[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(jac[5], [1.0, 1.0])  # angular z


def test_jacobian_zero_linear_column_for_axis_through_tool():
    arm = planar_2link(tool_x=0.0)  # tool point on joint-2 axis
    jac = jacobian(arm, [0.3, -0.7])
    assert np.allclose(jac[:3, 1], 0.0, atol=1e-12)


def finite_difference_jacobian(arm, q, h=1e-6):
    n = len(q)
    jac = np.zeros((6, n))
    for i in range(n):
        dq = np.zeros(n)
        dq[i] = h
        plus = fk(arm, q + dq)
        minus = fk(arm, q - dq)
        jac[:3, i] = (plus.position - minus.position) / (2 * h)
        jac[3:, i] = rotation_error_vec(plus.orientation, minus.orientation) / (2 * h)
    return jac


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(7)
    for name in ("arm6", "arm7"):
        arm = load_arm(name)
        lo, hi = arm.limits_arrays()
        worst = 0.0
        for _ in range(100):
            q = rng.uniform(lo, hi)
            err = np.abs(jacobian(arm, q) - finite_difference_jacobian(arm, q)).max()
            worst = max(worst, err)
        assert worst < 1e-4


# ---------------------------------------------------------------- ik


def test_ik_fixed_point_two_iterations():
    arm = load_arm("arm6")
    q0 = np.array([0.2, -0.5, 0.8, 0.1, 0.3, -0.2])
    target = fk(arm, q0)
    result = ik_dls(arm, q0, target, IKParams(max_iters=2, restarts=0))
    assert np.allclose(result, q0, atol=1e-9)


def test_ik_rejects_target_beyond_reach():
    arm = load_arm("arm6")
    target = Pose(
        np.array([arm.total_reach * 1.5, 0.0, 0.0]), np.array([1.0, 0.0, 0.0, 0.0])
    )
    with pytest.raises(Unreachable):
        ik_dls(arm, np.zeros(6), target)


def test_ik_round_trip_sample():
    # the full 1000-config sweep lives in the acceptance suite
    params = IKParams()
    for name in ("arm6", "arm7"):
        arm = load_arm(name)
        lo, hi = arm.limits_arrays()
        rng = np.random.default_rng(2024)
        q0 = clamp_to_limits(arm, np.zeros(arm.n))
        ok = 0
        for _ in range(30):
            q = rng.uniform(lo, hi)
            target = fk(arm, q)
            try:
                sol = ik_dls(arm, q0, target, params)
            except Unreachable:
                continue
            pose = fk(arm, sol)
            if (
                np.linalg.norm(pose.position - target.position) < 1e-3
                and quat_angle(pose.orientation, target.orientation) < math.radians(0.5)
            ):
                ok += 1
        assert ok >= 28, f"{name}: only {ok}/30 round trips converged"


def test_ik_deterministic():
    arm = load_arm("arm7")
    target = fk(arm, np.array([0.3, -0.4, 0.5, 1.0, -0.3, 0.4, 0.2]))
    q0 = clamp_to_limits(arm, np.zeros(7))
    a = ik_dls(arm, q0, target)
    b = ik_dls(arm, q0, target)
    assert np.array_equal(a, b)


def test_ik_result_within_limits():
    arm = load_arm("arm7")
    lo, hi = arm.limits_arrays()
    rng = np.random.default_rng(5)
    for _ in range(10):
        target = fk(arm, rng.uniform(lo, hi))
        try:
            sol = ik_dls(arm, clamp_to_limits(arm, np.zeros(7)), target)
        except Unreachable:
            continue
        assert np.all(sol >= lo) and np.all(sol <= hi)


# ---------------------------------------------------------------- clamp


def test_clamp_to_limits():
    arm = load_arm("arm7")
    lo, hi = arm.limits_arrays()
    q = np.zeros(7)
    assert np.array_equal(clamp_to_limits(arm, q), np.clip(q, lo, hi))
    q_over = hi + 1.0
    assert np.array_equal(clamp_to_limits(arm, q_over), hi)
    q_under = lo - 1.0
    assert np.array_equal(clamp_to_limits(arm, q_under), lo)


# ---------------------------------------------------------------- trajectory


def test_trajectory_null_move():
    arm = planar_2link()
    traj = plan_joint_trajectory(arm, [0.1, 0.2], [0.1, 0.2])
    assert traj.duration == 0.0
    assert len(traj.samples) == 1
    assert np.allclose(traj.samples[0], [0.1, 0.2])


def test_trajectory_analytic_duration():
    # d=1 rad, v=1 rad/s, a=4 rad/s^2: d >= v^2/a so t = d/v + v/a = 1.25 s
    arm = planar_2link()
    traj = plan_joint_trajectory(arm, [0.0, 0.0], [1.0, 0.0], dt=0.01, a_max=4.0)
    assert traj.duration == pytest.approx(1.25, abs=1e-12)


def test_trajectory_synchronized_joints():
    arm = planar_2link()
    traj = plan_joint_trajectory(arm, [0.0, 0.0], [1.0, 0.1], dt=0.01, a_max=4.0)
    assert traj.duration == pytest.approx(1.25, abs=1e-12)
    assert np.allclose(traj.samples[0], [0.0, 0.0])
    assert np.allclose(traj.samples[-1], [1.0, 0.1])
    # the short joint is slowed down, not finished early
    mid = traj.samples[len(traj.samples) // 2]
    assert 0.0 < mid[1] < 0.1


def test_trajectory_velocity_bound():
    arm = load_arm("arm6")
    lo, hi = arm.limits_arrays()
    vmax = arm.vel_limits()
    rng = np.random.default_rng(99)
    for _ in range(20):
        a, b = rng.uniform(lo, hi), rng.uniform(lo, hi)
        traj = plan_joint_trajectory(arm, a, b, dt=0.01)
        deltas = np.abs(np.diff(traj.samples, axis=0))
        assert np.all(deltas <= vmax * traj.dt + 1e-9)
        assert np.allclose(traj.samples[0], a)
        assert np.allclose(traj.samples[-1], b)


def test_trajectory_monotone_per_joint():
    arm = planar_2link()
    traj = plan_joint_trajectory(arm, [0.0, 0.3], [1.0, -0.2], dt=0.01)
    d = np.diff(traj.samples, axis=0)
    assert np.all(d[:, 0] >= -1e-12)
    assert np.all(d[:, 1] <= 1e-12)


def test_trajectory_rejects_out_of_limit_endpoints():
    arm = planar_2link()
    with pytest.raises(ValueError):
        plan_joint_trajectory(arm, [0.0, 0.0], [5.0, 0.0])
    with pytest.raises(ValueError):
        plan_joint_trajectory(arm, [-5.0, 0.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        plan_joint_trajectory(arm, [0.0, 0.0], [1.0, 0.0], dt=0.0)
