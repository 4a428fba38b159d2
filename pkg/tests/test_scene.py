import numpy as np
import pytest

from twindesk.geometry import Pose
from twindesk.scene import (
    COLLAPSED,
    DONE,
    DROPPED,
    PLACED,
    PRACTICE,
    TRIAL,
    SceneConfig,
    SessionClock,
    SessionEvent,
    apply_gripper_command,
    count_towers,
    release_cube,
    session_tick,
    spawn_layout,
    step,
    triangle_positions,
    try_grasp,
)

CFG = SceneConfig()


def pose_at(x, y, z):
    return Pose(np.array([x, y, z], dtype=float), np.array([1.0, 0.0, 0.0, 0.0]))


def hold(world, cfg, cube_id):
    """Grasp a specific cube by parking the gripper on it."""
    cube = world.cube(cube_id)
    world.gripper_pose = Pose(cube.pose.position.copy(), cube.pose.orientation.copy())
    got, events = try_grasp(world, world.gripper_pose, cfg.max_opening, cfg)
    assert got == cube_id, f"could not grasp {cube_id}"
    return events


# ---------------------------------------------------------------- layout


def test_spawn_three_cubes_at_rest_height():
    world = spawn_layout(CFG)
    assert len(world.cubes) == 3
    for c in world.cubes:
        assert c.pose.position[2] == pytest.approx(CFG.table_height + 0.020)
        assert c.supported_by == "table"
        assert not c.attached


def test_spawn_triangle_distances():
    world = spawn_layout(CFG)
    pos = {c.id: c.pose.position[:2] for c in world.cubes}
    base = np.linalg.norm(pos["b"] - pos["c"])
    assert base == pytest.approx(CFG.triangle_base)
    mid = (pos["b"] + pos["c"]) / 2
    assert np.linalg.norm(pos["a"] - mid) == pytest.approx(CFG.triangle_apex)
    centroid = (pos["a"] + pos["b"] + pos["c"]) / 3
    assert centroid == pytest.approx(np.array(CFG.center), abs=1e-12)


def test_spawn_overlapping_layout_rejected():
    with pytest.raises(ValueError):
        spawn_layout(SceneConfig(triangle_base=0.0))


def test_triangle_positions_match_world():
    spots = triangle_positions(CFG)
    world = spawn_layout(CFG)
    for c in world.cubes:
        assert c.pose.position[:2] == pytest.approx(np.array(spots[c.id]))


# ---------------------------------------------------------------- grasp


def test_grasp_centered_cube():
    world = spawn_layout(CFG)
    cube = world.cubes[0]
    gp = Pose(cube.pose.position.copy(), np.array([1.0, 0.0, 0.0, 0.0]))
    got, events = try_grasp(world, gp, 0.060, CFG, t=1.0)
    assert got == cube.id
    assert cube.attached
    assert len(events) == 1 and events[0].type == "pick"
    assert events[0].detail["cube"] == cube.id


def test_grasp_misses_beyond_capture_radius():
    world = spawn_layout(CFG)
    cube = world.cubes[0]
    p = cube.pose.position
    gp = pose_at(p[0] + 0.030, p[1], p[2])
    got, events = try_grasp(world, gp, 0.060, CFG)
    assert got is None
    assert events == []


def test_grasp_fails_when_fingers_too_narrow():
    world = spawn_layout(CFG)
    cube = world.cubes[0]
    gp = Pose(cube.pose.position.copy(), np.array([1.0, 0.0, 0.0, 0.0]))
    got, _ = try_grasp(world, gp, 0.035, CFG)
    assert got is None


def test_grasp_refused_while_holding():
    world = spawn_layout(CFG)
    hold(world, CFG, "a")
    other = world.cube("b")
    gp = Pose(other.pose.position.copy(), np.array([1.0, 0.0, 0.0, 0.0]))
    got, _ = try_grasp(world, gp, 0.085, CFG)
    assert got is None


def test_buried_cube_not_graspable():
    world = spawn_layout(CFG)
    hold(world, CFG, "a")
    b = world.cube("b")
    release_cube(world, pose_at(b.pose.position[0], b.pose.position[1], 0.08), CFG)
    # "a" now sits on "b"; grasping "b" must fail, grasping "a" works
    gp = Pose(b.pose.position.copy(), np.array([1.0, 0.0, 0.0, 0.0]))
    got, _ = try_grasp(world, gp, 0.085, CFG)
    assert got != "b"


# ---------------------------------------------------------------- release


def target_xy():
    return CFG.center


def test_release_on_target_zone_places():
    world = spawn_layout(CFG)
    hold(world, CFG, "a")
    tx, ty = target_xy()
    outcome, events = release_cube(world, pose_at(tx, ty, 0.10), CFG, t=2.0)
    assert outcome == PLACED
    assert events[0].type == "place"
    assert events[0].detail["support"] == "target"
    a = world.cube("a")
    assert a.pose.position[2] == pytest.approx(0.020)
    assert not a.attached


def test_release_slightly_off_center_on_cube_places():
    world = spawn_layout(CFG)
    tx, ty = target_xy()
    hold(world, CFG, "a")
    release_cube(world, pose_at(tx, ty, 0.10), CFG)
    hold(world, CFG, "b")
    outcome, events = release_cube(world, pose_at(tx + 0.005, ty, 0.10), CFG)
    assert outcome == PLACED
    b = world.cube("b")
    assert b.supported_by == "a"
    assert b.pose.position[2] == pytest.approx(0.060)
    assert events[0].detail["support"] == "a"


def test_release_off_center_on_two_stack_collapses():
    world = spawn_layout(CFG)
    tx, ty = target_xy()
    hold(world, CFG, "a")
    release_cube(world, pose_at(tx, ty, 0.10), CFG)
    hold(world, CFG, "b")
    release_cube(world, pose_at(tx, ty, 0.10), CFG)
    hold(world, CFG, "c")
    outcome, events = release_cube(world, pose_at(tx + 0.020, ty, 0.15), CFG)
    assert outcome == COLLAPSED
    assert events[0].type == "collapse"
    a, b, c = world.cube("a"), world.cube("b"), world.cube("c")
    # bottom cube keeps its spot, struck top and released cube hit the table
    assert a.supported_by == "table"
    assert a.pose.position[:2] == pytest.approx([tx, ty])
    assert b.supported_by == "table" and b.pose.position[2] == pytest.approx(0.020)
    assert c.supported_by == "table" and c.pose.position[2] == pytest.approx(0.020)


def test_release_over_empty_table_drops():
    world = spawn_layout(CFG)
    hold(world, CFG, "a")
    outcome, events = release_cube(world, pose_at(0.6, 0.3, 0.2), CFG)
    assert outcome == DROPPED
    assert events[0].type == "place"
    assert events[0].detail.get("on_table") is True
    a = world.cube("a")
    assert a.pose.position[2] == pytest.approx(0.020)


def test_release_striking_lone_table_cube_drops_beside():
    world = spawn_layout(CFG)
    b = world.cube("b")
    bx, by = float(b.pose.position[0]), float(b.pose.position[1])
    hold(world, CFG, "a")
    outcome, _ = release_cube(world, pose_at(bx + 0.020, by, 0.15), CFG)
    assert outcome == DROPPED
    a = world.cube("a")
    assert a.supported_by == "table"
    # struck cube stays put and the pair does not interpenetrate
    assert b.pose.position[:2] == pytest.approx([bx, by])
    assert np.linalg.norm(a.pose.position[:2] - b.pose.position[:2]) >= CFG.cube_size - 1e-9


def test_release_without_held_cube_is_an_error():
    world = spawn_layout(CFG)
    with pytest.raises(ValueError):
        release_cube(world, pose_at(0.3, 0.0, 0.1), CFG)


# ---------------------------------------------------------------- step


def test_attached_cube_tracks_gripper():
    world = spawn_layout(CFG)
    hold(world, CFG, "a")
    p0 = world.cube("a").pose.position.copy()
    world.gripper_pose = pose_at(p0[0] + 0.10, p0[1], p0[2])
    step(world, 0.01, CFG)
    assert world.cube("a").pose.position[0] == pytest.approx(p0[0] + 0.10)


def test_step_without_motion_emits_nothing():
    world = spawn_layout(CFG)
    assert step(world, 0.01, CFG) == []
    assert step(world, 0.01, CFG) == []


def test_step_rejects_nonpositive_dt():
    world = spawn_layout(CFG)
    with pytest.raises(ValueError):
        step(world, 0.0, CFG)


def build_tower(world, cfg):
    tx, ty = cfg.center
    for i, cid in enumerate(("a", "b", "c")):
        hold(world, cfg, cid)
        release_cube(world, pose_at(tx, ty, 0.20), cfg)


def test_tower_complete_and_reset():
    world = spawn_layout(CFG)
    build_tower(world, CFG)
    events = step(world, 0.01, CFG, t=30.0, phase=TRIAL)
    kinds = [e.type for e in events]
    assert "tower_complete" in kinds
    ev = events[kinds.index("tower_complete")]
    assert ev.detail["cubes"] == ["a", "b", "c"]
    # reset soundness: the world matches a fresh spawn exactly
    fresh = spawn_layout(CFG)
    for got, want in zip(world.cubes, fresh.cubes):
        assert got.id == want.id
        assert np.array_equal(got.pose.position, want.pose.position)
        assert got.supported_by == "table"
        assert not got.attached
    # no duplicate tower event on the next step
    assert step(world, 0.01, CFG) == []


# ---------------------------------------------------------------- session


def test_phase_change_at_practice_end():
    clock = SessionClock()
    clock.elapsed = 299.0
    events = session_tick(clock, 2.0)
    assert clock.phase == TRIAL
    assert len(events) == 1
    assert events[0].type == "phase_change"
    assert events[0].detail == {"from": PRACTICE, "to": TRIAL, "phase": TRIAL}
    assert events[0].t == pytest.approx(300.0)


def test_trial_to_done():
    clock = SessionClock(phase=TRIAL, elapsed=899.95)
    events = session_tick(clock, 0.1)
    assert clock.phase == DONE
    assert events[0].detail["to"] == DONE
    # further ticks change nothing
    assert session_tick(clock, 1.0) == []
    assert clock.phase == DONE


def test_tick_accumulation_to_done():
    clock = SessionClock(phase=TRIAL, elapsed=300.0)
    events = []
    for _ in range(6000):
        events.extend(session_tick(clock, 0.1))
    assert clock.phase == DONE
    assert [e.detail["to"] for e in events] == [DONE]


def test_phases_entered_once_in_order():
    clock = SessionClock(practice_len=1.0, trial_len=2.0)
    seen = []
    for _ in range(400):
        for ev in session_tick(clock, 0.01):
            seen.append((ev.detail["from"], ev.detail["to"]))
    assert seen == [(PRACTICE, TRIAL), (TRIAL, DONE)]


def test_zero_practice_starts_trial_on_first_tick():
    clock = SessionClock(practice_len=0.0, trial_len=10.0)
    events = session_tick(clock, 0.01)
    assert clock.phase == TRIAL
    assert len(events) == 1


def test_session_tick_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        session_tick(SessionClock(), 0.0)


# ---------------------------------------------------------------- counting


def test_count_towers_trial_only():
    log = [
        SessionEvent(10.0, "tower_complete", {"phase": PRACTICE}),
        SessionEvent(400.0, "tower_complete", {"phase": TRIAL}),
        SessionEvent(500.0, "tower_complete", {"phase": TRIAL}),
        SessionEvent(600.0, "tower_complete", {"phase": TRIAL}),
        SessionEvent(650.0, "place", {"phase": TRIAL}),
    ]
    assert count_towers(log) == 3


def test_count_towers_accepts_dicts_and_empty():
    assert count_towers([]) == 0
    log = [{"t": 1.0, "type": "tower_complete", "detail": {"phase": TRIAL}}]
    assert count_towers(log) == 1


# ---------------------------------------------------------------- fuzz


def test_command_fuzz_invariants():
    rng = np.random.default_rng(0)
    cfg = CFG
    world = spawn_layout(cfg)
    picks = places = collapses = 0
    t = 0.0
    tx, ty = cfg.center

    def interesting_xy():
        # bias toward cube/target neighborhoods so grasps and stacks happen
        mode = rng.integers(0, 3)
        if mode == 0:
            c = world.cubes[rng.integers(0, 3)]
            return (
                float(c.pose.position[0]) + rng.uniform(-0.03, 0.03),
                float(c.pose.position[1]) + rng.uniform(-0.03, 0.03),
            )
        if mode == 1:
            return tx + rng.uniform(-0.03, 0.03), ty + rng.uniform(-0.03, 0.03)
        return rng.uniform(0.1, 0.66), rng.uniform(-0.4, 0.4)

    for i in range(10_000):
        t += 0.01
        action = rng.integers(0, 4)
        if action == 0:
            x, y = interesting_xy()
            z = float(rng.choice([0.020, 0.060, 0.100, rng.uniform(0.0, 0.3)]))
            world.gripper_pose = pose_at(x, y, z)
        elif action == 1:
            _, events = apply_gripper_command(world, 3, 0.0, cfg, t)
            picks += sum(1 for e in events if e.type == "pick")
        elif action == 2:
            _, events = apply_gripper_command(world, 2, 0.0, cfg, t)
            places += sum(1 for e in events if e.type == "place")
            collapses += sum(1 for e in events if e.type == "collapse")
        else:
            step(world, 0.01, cfg, t)

        attached = [c for c in world.cubes if c.attached]
        assert len(attached) <= 1
        assert picks >= places + len(attached)
        assert collapses <= places
        # per-level separation for resting cubes
        by_level = {}
        for c in world.cubes:
            if c.attached:
                continue
            level = round((c.pose.position[2] - cfg.table_height - 0.02) / cfg.cube_size)
            by_level.setdefault(level, []).append(c)
        for cubes in by_level.values():
            for j, a in enumerate(cubes):
                for b in cubes[j + 1 :]:
                    d = np.linalg.norm(a.pose.position[:2] - b.pose.position[:2])
                    assert d >= cfg.cube_size - 1e-9, f"step {i}: {a.id}/{b.id} overlap"
        # support graph sanity: every chain terminates at the table
        for c in world.cubes:
            if c.attached:
                assert c.supported_by is None
                continue
            seen = set()
            cur = c
            while cur.supported_by != "table":
                assert cur.supported_by is not None
                assert cur.id not in seen
                seen.add(cur.id)
                cur = world.cube(cur.supported_by)

    assert picks > 0 and places > 0  # the fuzz actually exercised the rules
