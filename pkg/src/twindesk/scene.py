"""Task world: table, three 40 mm cubes in an isosceles triangle, grasp and
stack rules, session phases, and the event stream feeding evaluation.

Settling is quasi-static: cubes rest flat at their support height the instant
they are released, so every outcome is a deterministic rule, not physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import Pose

PRACTICE = "PRACTICE"
TRIAL = "TRIAL"
DONE = "DONE"

EVENT_TYPES = frozenset(
    {
        "grab",
        "release",
        "pick",
        "place",
        "collapse",
        "tower_complete",
        "goal_rejected",
        "fault",
        "phase_change",
        "shutdown",
    }
)

PLACED = "placed"
COLLAPSED = "collapsed"
DROPPED = "dropped"
NO_GRASP = "no_grasp"


@dataclass
class SessionEvent:
    t: float
    type: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.type not in EVENT_TYPES:
            raise ValueError(f"unknown event type {self.type!r}")

    def as_dict(self) -> dict:
        return {"t": self.t, "type": self.type, "detail": self.detail}


@dataclass
class SceneConfig:
    table_height: float = 0.0
    cube_size: float = 0.040
    capture_radius: float = 0.020
    stack_tol: float = 0.012
    max_opening: float = 0.085
    # triangle sized so every spawn spot stays inside the arm's reach
    # envelope with the tool pointing straight down (cap is ~0.47 m radial)
    triangle_base: float = 0.22  # distance between the two base cubes
    triangle_apex: float = 0.19  # apex distance from the base midpoint
    center: tuple[float, float] = (0.38, 0.0)  # tower target (triangle centroid)
    table_center: tuple[float, float] = (0.38, 0.0)
    table_size: tuple[float, float] = (1.0, 1.0)

    def rest_z(self, level: int = 0) -> float:
        return self.table_height + self.cube_size / 2 + self.cube_size * level


@dataclass
class Cube:
    id: str
    pose: Pose
    attached: bool = False
    supported_by: Optional[str] = "table"  # cube id, "table", or None while held


@dataclass
class WorldState:
    cubes: list[Cube]
    gripper_pose: Pose
    gripper_opening: float
    table_height: float

    def cube(self, cube_id: str) -> Cube:
        for c in self.cubes:
            if c.id == cube_id:
                return c
        raise KeyError(cube_id)

    def attached_cube(self) -> Optional[Cube]:
        for c in self.cubes:
            if c.attached:
                return c
        return None


@dataclass
class SessionClock:
    practice_len: float = 300.0
    trial_len: float = 600.0
    phase: str = PRACTICE
    elapsed: float = 0.0


# ---------------------------------------------------------------- layout


def triangle_positions(config: SceneConfig) -> dict[str, tuple[float, float]]:
    """Apex toward the arm, two base cubes across; centroid at config.center."""
    cx, cy = config.center
    d = config.triangle_apex
    apex = (cx - 2.0 * d / 3.0, cy)
    base_x = cx + d / 3.0
    half = config.triangle_base / 2.0
    return {"a": apex, "b": (base_x, cy - half), "c": (base_x, cy + half)}


def spawn_layout(config: SceneConfig) -> WorldState:
    spots = triangle_positions(config)
    cubes = []
    for cid, (x, y) in sorted(spots.items()):
        pose = Pose(np.array([x, y, config.rest_z(0)]), np.array([1.0, 0.0, 0.0, 0.0]))
        cubes.append(Cube(cid, pose))
    for i, a in enumerate(cubes):
        for b in cubes[i + 1 :]:
            if float(np.linalg.norm(a.pose.position[:2] - b.pose.position[:2])) < config.cube_size:
                raise ValueError(f"cubes {a.id} and {b.id} overlap in the layout")
    gripper = Pose(
        np.array([config.center[0], config.center[1], 0.35]),
        np.array([1.0, 0.0, 0.0, 0.0]),
    )
    return WorldState(cubes, gripper, config.max_opening, config.table_height)


# ---------------------------------------------------------------- helpers


def _level(world: WorldState, cube: Cube) -> int:
    n = 0
    cur = cube
    while cur.supported_by not in (None, "table"):
        cur = world.cube(cur.supported_by)
        n += 1
        if n > len(world.cubes):
            raise RuntimeError("support cycle")
    return n


def _supports_someone(world: WorldState, cube_id: str) -> bool:
    return any(c.supported_by == cube_id for c in world.cubes)


def _rest_pose(config: SceneConfig, x: float, y: float, level: int) -> Pose:
    return Pose(np.array([x, y, config.rest_z(level)]), np.array([1.0, 0.0, 0.0, 0.0]))


def _table_level_cubes(world: WorldState) -> list[Cube]:
    return [c for c in world.cubes if not c.attached and c.supported_by == "table"]


def _in_table_bounds(config: SceneConfig, x: float, y: float) -> bool:
    cx, cy = config.table_center
    hx = config.table_size[0] / 2 - config.cube_size / 2
    hy = config.table_size[1] / 2 - config.cube_size / 2
    return abs(x - cx) <= hx and abs(y - cy) <= hy


def _free_table_spot(world: WorldState, config: SceneConfig, near_x: float, near_y: float):
    """Deterministic spiral search for an unoccupied table position."""

    def ok(x, y):
        if not _in_table_bounds(config, x, y):
            return False
        for c in _table_level_cubes(world):
            if float(np.linalg.norm(c.pose.position[:2] - np.array([x, y]))) < config.cube_size:
                return False
        return True

    if ok(near_x, near_y):
        return near_x, near_y
    step = config.cube_size * 1.5
    for ring in range(1, 16):
        r = ring * step
        for k in range(12):
            ang = 2.0 * math.pi * k / 12.0
            x = near_x + r * math.cos(ang)
            y = near_y + r * math.sin(ang)
            if ok(x, y):
                return x, y
    return near_x, near_y  # cramped table; accept overlap rather than loop forever


# ---------------------------------------------------------------- grasp


def try_grasp(
    world: WorldState,
    gripper_pose: Pose,
    opening_before: float,
    config: SceneConfig,
    t: float = 0.0,
    phase: str = TRIAL,
):
    """Attach the nearest free cube within capture_radius, fingers permitting.

    Returns (cube_id or None, events)."""
    if opening_before <= config.cube_size:
        return None, []
    if world.attached_cube() is not None:
        return None, []
    gp = np.asarray(gripper_pose.position, dtype=float)
    best = None
    best_key = None
    for c in world.cubes:
        if c.attached or _supports_someone(world, c.id):
            continue  # buried cubes cannot be pulled out
        d = float(np.linalg.norm(c.pose.position - gp))
        if d <= config.capture_radius:
            key = (d, -c.pose.position[2])
            if best_key is None or key < best_key:
                best, best_key = c, key
    if best is None:
        return None, []
    best.attached = True
    best.supported_by = None
    best.pose = Pose(gp.copy(), np.asarray(gripper_pose.orientation, dtype=float).copy())
    ev = SessionEvent(t, "pick", {"cube": best.id, "phase": phase})
    return best.id, [ev]


# ---------------------------------------------------------------- release


def _find_strike_target(
    world: WorldState, config: SceneConfig, x: float, y: float, exclude: str
):
    """Highest unattached cube whose footprint the released cube lands on."""
    best = None
    for c in world.cubes:
        if c.attached or c.id == exclude:
            continue
        dx = abs(c.pose.position[0] - x)
        dy = abs(c.pose.position[1] - y)
        if max(dx, dy) < config.cube_size:
            if best is None or c.pose.position[2] > best.pose.position[2]:
                best = c
    return best


def _same_level_conflict(
    world: WorldState, config: SceneConfig, cube_id: str, x: float, y: float, level: int
) -> bool:
    for c in world.cubes:
        if c.id == cube_id or c.attached:
            continue
        if _level(world, c) != level:
            continue
        if float(np.linalg.norm(c.pose.position[:2] - np.array([x, y]))) < config.cube_size:
            return True
    return False


def release_cube(
    world: WorldState,
    gripper_pose: Pose,
    config: SceneConfig,
    t: float = 0.0,
    phase: str = TRIAL,
):
    """Detach the held cube and classify the outcome.

    Returns (outcome, events): PLACED lands within stack_tol of a support (a
    free cube top, or the table target zone); COLLAPSED strikes the top of a
    cube-on-cube stack off tolerance, scattering struck and released cubes to
    the table; DROPPED is everything else (place event with on_table)."""
    held = world.attached_cube()
    if held is None:
        raise ValueError("no cube attached")
    x, y = float(gripper_pose.position[0]), float(gripper_pose.position[1])
    held.attached = False
    events = []

    target = _find_strike_target(world, config, x, y, exclude=held.id)
    if target is not None:
        offset = float(np.linalg.norm(target.pose.position[:2] - np.array([x, y])))
        level = _level(world, target) + 1
        if offset <= config.stack_tol and not _same_level_conflict(
            world, config, held.id, x, y, level
        ):
            held.supported_by = target.id
            held.pose = _rest_pose(config, x, y, level)
            events.append(
                SessionEvent(
                    t, "place", {"cube": held.id, "support": target.id, "phase": phase}
                )
            )
            return PLACED, events
        if target.supported_by not in (None, "table"):
            # knocked the top off a real stack: struck cube and released cube
            # scatter to the table, anything below stays put
            sx, sy = _free_table_spot(
                world, config, float(target.pose.position[0]), float(target.pose.position[1])
            )
            target.supported_by = "table"
            target.pose = _rest_pose(config, sx, sy, 0)
            hx, hy = _free_table_spot(world, config, x, y)
            held.supported_by = "table"
            held.pose = _rest_pose(config, hx, hy, 0)
            events.append(
                SessionEvent(
                    t,
                    "collapse",
                    {"released": held.id, "struck": target.id, "phase": phase},
                )
            )
            return COLLAPSED, events
        # struck a lone table cube: released cube slides off beside it
        hx, hy = _free_table_spot(world, config, x, y)
        held.supported_by = "table"
        held.pose = _rest_pose(config, hx, hy, 0)
        events.append(
            SessionEvent(
                t, "place", {"cube": held.id, "on_table": True, "phase": phase}
            )
        )
        return DROPPED, events

    # nothing underneath: table target zone counts as a support
    tx, ty = config.center
    if float(np.hypot(x - tx, y - ty)) <= config.stack_tol:
        held.supported_by = "table"
        held.pose = _rest_pose(config, x, y, 0)
        events.append(
            SessionEvent(
                t, "place", {"cube": held.id, "support": "target", "phase": phase}
            )
        )
        return PLACED, events

    hx, hy = _free_table_spot(world, config, x, y)
    held.supported_by = "table"
    held.pose = _rest_pose(config, hx, hy, 0)
    events.append(
        SessionEvent(t, "place", {"cube": held.id, "on_table": True, "phase": phase})
    )
    return DROPPED, events


# ---------------------------------------------------------------- stepping


def _tower_cubes(world: WorldState, config: SceneConfig) -> list[str]:
    """Bottom-to-top ids of a height-3 stack at the target zone, else []."""
    tx, ty = config.center
    for c in _table_level_cubes(world):
        if float(np.hypot(c.pose.position[0] - tx, c.pose.position[1] - ty)) > config.stack_tol:
            continue
        chain = [c]
        while True:
            above = [u for u in world.cubes if u.supported_by == chain[-1].id]
            if not above:
                break
            chain.append(above[0])
        if len(chain) >= 3:
            return [u.id for u in chain]
    return []


def step(
    world: WorldState,
    dt: float,
    config: SceneConfig,
    t: float = 0.0,
    phase: str = TRIAL,
):
    """Track the gripper, settle free cubes, detect tower completion.

    Returns the event list; the world auto-resets after a completed tower."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    events = []
    held = world.attached_cube()
    if held is not None:
        held.pose = Pose(
            np.asarray(world.gripper_pose.position, dtype=float).copy(),
            np.asarray(world.gripper_pose.orientation, dtype=float).copy(),
        )
    for c in world.cubes:
        if c.attached:
            continue
        z = config.rest_z(_level(world, c))
        if c.pose.position[2] != z:
            c.pose = _rest_pose(
                config, float(c.pose.position[0]), float(c.pose.position[1]), _level(world, c)
            )
    tower = _tower_cubes(world, config)
    if tower:
        events.append(SessionEvent(t, "tower_complete", {"cubes": tower, "phase": phase}))
        fresh = spawn_layout(config)
        world.cubes = fresh.cubes
    return events


# ---------------------------------------------------------------- session


def session_tick(clock: SessionClock, dt: float):
    """Advance the session clock; returns phase_change events."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if clock.phase == DONE:
        clock.elapsed += dt
        return []
    clock.elapsed += dt
    events = []
    eps = 1e-9
    if clock.phase == PRACTICE and clock.elapsed >= clock.practice_len - eps:
        clock.phase = TRIAL
        events.append(
            SessionEvent(
                clock.practice_len,
                "phase_change",
                {"from": PRACTICE, "to": TRIAL, "phase": TRIAL},
            )
        )
    if clock.phase == TRIAL and clock.elapsed >= clock.practice_len + clock.trial_len - eps:
        clock.phase = DONE
        events.append(
            SessionEvent(
                clock.practice_len + clock.trial_len,
                "phase_change",
                {"from": TRIAL, "to": DONE, "phase": DONE},
            )
        )
    return events


def count_towers(event_log) -> int:
    """tower_complete events during the TRIAL phase."""
    n = 0
    for ev in event_log:
        if isinstance(ev, SessionEvent):
            kind, detail = ev.type, ev.detail
        else:
            kind, detail = ev.get("type"), ev.get("detail", {})
        if kind == "tower_complete" and detail.get("phase") == TRIAL:
            n += 1
    return n


# ---------------------------------------------------------------- commands


def apply_gripper_command(
    world: WorldState,
    kind: int,
    opening: float,
    config: SceneConfig,
    t: float = 0.0,
    phase: str = TRIAL,
):
    """Finger commands: 3=close (attempt grasp), 2=open (release if holding).

    Returns (outcome, events); outcome None for commands that are not finger
    motions (0=release / 1=grab are twin-mode commands, handled elsewhere)."""
    if kind == 3:
        before = world.gripper_opening
        cube_id, events = try_grasp(world, world.gripper_pose, before, config, t, phase)
        world.gripper_opening = config.cube_size if cube_id else 0.0
        return (cube_id if cube_id else NO_GRASP), events
    if kind == 2:
        events = []
        outcome = None
        if world.attached_cube() is not None:
            outcome, events = release_cube(world, world.gripper_pose, config, t, phase)
        world.gripper_opening = opening if opening > 0 else config.max_opening
        return outcome, events
    return None, []


def geometry_snapshot(world: WorldState, config: SceneConfig) -> dict:
    """JSON-ready world geometry for remote rendering."""
    return {
        "table_height": world.table_height,
        "table_center": list(config.table_center),
        "table_size": list(config.table_size),
        "target": list(config.center),
        "cube_size": config.cube_size,
        "cubes": [
            {
                "id": c.id,
                "pos": [float(v) for v in c.pose.position],
                "quat": [float(v) for v in c.pose.orientation],
                "attached": c.attached,
            }
            for c in world.cubes
        ],
        "gripper": {
            "pos": [float(v) for v in world.gripper_pose.position],
            "quat": [float(v) for v in world.gripper_pose.orientation],
            "opening": world.gripper_opening,
        },
    }
