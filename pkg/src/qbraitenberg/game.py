"""Seeded four-lane obstacle game driven by the vehicle's control circuit.

Lanes are numbered 1..4 left to right; obstacles ride the two terminal
tracks only (track 1 = lane 1, track 2 = lane 4). The robot is two lanes
wide, advances one row per tick, and shifts, holds, or takes off according
to its motor command. Obstacles move one row per tick up or down the road;
their direction is fixed at spawn time. Because the robot also advances one
row per tick, an oncoming obstacle closes two rows per tick and one moving
away holds a constant offset, which is why the detection window must reach
at least two rows ahead.

All randomness comes from one splitmix64 stream per episode with a fixed
draw order, so a (seed, config) pair determines the run down to the trace
bytes, whichever brain computes the motor commands.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Callable, Mapping

from .brain import MotorOutput, SensorInput, control_table, drive

#: Lane occupied by each obstacle track.
TRACK_LANES = {1: 1, 2: 4}

_MASK64 = (1 << 64) - 1


class EpisodeStatus(Enum):
    RUNNING = "running"
    WON = "won"
    COLLIDED = "collided"
    TIMED_OUT = "timed_out"


class SplitMix64:
    """splitmix64 generator: tiny, portable, reproducible across platforms."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class GameConfig:
    """Tunable game parameters; the defaults are the reference setup.

    max_ticks of None resolves to 4 * road_length. detection_window must be
    at least 2 because oncoming obstacles close two rows per tick; anything
    shorter would let them arrive unsensed.
    """

    road_length: int = 100
    detection_window: int = 3
    spawn_horizon: int = 10
    spawn_prob: float = 0.15
    min_gap: int = 2
    max_ticks: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_ticks is None:
            object.__setattr__(self, "max_ticks", 4 * self.road_length)
        if self.road_length < 1:
            raise ValueError(f"road_length must be >= 1, got {self.road_length}")
        if self.detection_window < 2:
            raise ValueError(f"detection_window must be >= 2, got {self.detection_window}")
        if self.spawn_horizon <= self.detection_window:
            raise ValueError(
                f"spawn_horizon ({self.spawn_horizon}) must exceed "
                f"detection_window ({self.detection_window})"
            )
        if not 0.0 <= self.spawn_prob <= 1.0:
            raise ValueError(f"spawn_prob must be in [0, 1], got {self.spawn_prob}")
        if self.min_gap < 0:
            raise ValueError(f"min_gap must be >= 0, got {self.min_gap}")
        if self.max_ticks < 1:
            raise ValueError(f"max_ticks must be >= 1, got {self.max_ticks}")

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "GameConfig":
        """Build a config from a JSON-style mapping; absent fields take defaults."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config fields: {unknown}")
        return cls(**dict(data))


@dataclass(frozen=True)
class RobotPose:
    """Robot position: road row, left lane of the two occupied, and altitude."""

    row: int = 0
    left_lane: int = 2
    altitude: int = 0

    def __post_init__(self) -> None:
        if self.row < 0:
            raise ValueError(f"row must be >= 0, got {self.row}")
        if self.left_lane not in (1, 2, 3):
            raise ValueError(f"left_lane must be 1, 2 or 3, got {self.left_lane}")
        if self.altitude not in (0, 1):
            raise ValueError(f"altitude must be 0 or 1, got {self.altitude}")

    @property
    def lanes(self) -> tuple[int, int]:
        return (self.left_lane, self.left_lane + 1)


@dataclass(frozen=True)
class Obstacle:
    """One obstacle on a terminal track; direction is rows per tick, fixed at spawn."""

    track: int
    row: int
    direction: int

    def __post_init__(self) -> None:
        if self.track not in (1, 2):
            raise ValueError(f"track must be 1 or 2, got {self.track}")
        if self.direction not in (-1, 1):
            raise ValueError(f"direction must be -1 or +1, got {self.direction}")


@dataclass(frozen=True)
class TickTrace:
    """Everything one executed tick did, for logging and replay comparison."""

    tick: int
    before: RobotPose
    after: RobotPose
    sensors: SensorInput
    motors: MotorOutput
    obstacles: tuple[Obstacle, ...]
    status: EpisodeStatus


@dataclass
class GameState:
    """Mutable episode state; owned by exactly one caller at a time."""

    config: GameConfig
    robot: RobotPose
    obstacles: list[Obstacle]
    rng: SplitMix64
    tick: int = 0
    status: EpisodeStatus = EpisodeStatus.RUNNING
    collision_tick: int | None = None
    trace: list[TickTrace] = field(default_factory=list)


@dataclass(frozen=True)
class EpisodeResult:
    status: EpisodeStatus
    ticks_elapsed: int
    collision_tick: int | None
    trace: tuple[TickTrace, ...]


def new_game(config: GameConfig) -> GameState:
    """Fresh episode: robot at row 0 on the middle lanes, empty road."""
    return GameState(config, RobotPose(), [], SplitMix64(config.seed))


def sense(state: GameState) -> SensorInput:
    """OR of each track's presence within the forward detection window."""
    lo = state.robot.row + 1
    hi = state.robot.row + state.config.detection_window
    hit = {1: False, 2: False}
    for o in state.obstacles:
        if lo <= o.row <= hi:
            hit[o.track] = True
    return SensorInput(int(hit[1]), int(hit[2]))


def act(state: GameState, motors: MotorOutput) -> GameState:
    """Apply one motor command: lift or lane shift, then advance one row."""
    pose = state.robot
    if motors.m3:
        lane, altitude = pose.left_lane, 1
    else:
        altitude = 0
        if motors.m1 and not motors.m2:
            lane = min(pose.left_lane + 1, 3)  # left wheel only: veer right
        elif motors.m2 and not motors.m1:
            lane = max(pose.left_lane - 1, 1)  # right wheel only: veer left
        else:
            lane = pose.left_lane
    state.robot = RobotPose(pose.row + 1, lane, altitude)
    return state


def spawn_obstacles(state: GameState) -> GameState:
    """Spawn pass, track 1 then track 2, spawn coin before direction coin.

    A passing spawn coin inserts an obstacle at the spawn horizon unless an
    existing same-track obstacle lies within min_gap rows of that spot; the
    direction coin is drawn only when the insertion actually happens.
    """
    cfg = state.config
    spawn_row = state.robot.row + cfg.spawn_horizon
    for track in (1, 2):
        if state.rng.random() >= cfg.spawn_prob:
            continue
        if any(o.track == track and abs(o.row - spawn_row) <= cfg.min_gap for o in state.obstacles):
            continue
        direction = -1 if state.rng.random() < 0.5 else 1
        state.obstacles.append(Obstacle(track, spawn_row, direction))
    return state


def step(state: GameState, brain: Callable[[SensorInput], MotorOutput] | None = None) -> GameState:
    """Advance one tick in fixed order: sense, drive, act, move obstacles,
    resolve collisions, despawn/spawn, then check finish line and tick budget.

    ``brain`` defaults to the quantum drive.
    """
    if state.status is not EpisodeStatus.RUNNING:
        raise RuntimeError(f"cannot step a {state.status.value} episode")
    if brain is None:
        brain = drive
    cfg = state.config

    before = state.robot
    sensors = sense(state)
    motors = brain(sensors)
    act(state, motors)
    state.obstacles = [replace(o, row=o.row + o.direction) for o in state.obstacles]

    robot = state.robot
    if robot.altitude == 0:
        for o in state.obstacles:
            if o.row == robot.row and TRACK_LANES[o.track] in robot.lanes:
                state.status = EpisodeStatus.COLLIDED
                state.collision_tick = state.tick
                break

    state.obstacles = [o for o in state.obstacles if o.row >= robot.row - 2]
    spawn_obstacles(state)

    if state.status is EpisodeStatus.RUNNING and robot.row >= cfg.road_length:
        state.status = EpisodeStatus.WON
    state.tick += 1
    if state.status is EpisodeStatus.RUNNING and state.tick >= cfg.max_ticks:
        state.status = EpisodeStatus.TIMED_OUT

    state.trace.append(
        TickTrace(state.tick - 1, before, robot, sensors, motors, tuple(state.obstacles), state.status)
    )
    return state


def run_episode(config: GameConfig, brain_kind: str = "quantum") -> EpisodeResult:
    """Run one seeded episode to completion under the chosen brain.

    The control law is tabulated once up front (the sensor domain has only
    four points), so per-tick cost is game logic; a determinism failure in a
    quantum brain surfaces here before the first tick.
    """
    table = control_table(brain_kind)
    state = new_game(config)
    while state.status is EpisodeStatus.RUNNING:
        step(state, table.__getitem__)
    return EpisodeResult(state.status, state.tick, state.collision_tick, tuple(state.trace))


def trace_json_line(record: TickTrace) -> str:
    """Serialize one tick as a JSONL line; key order is part of the format.

    Pose fields are the post-step values; the obstacle list is the post-move,
    post-spawn snapshot.
    """
    payload = {
        "tick": record.tick,
        "row": record.after.row,
        "left_lane": record.after.left_lane,
        "altitude": record.after.altitude,
        "s1": record.sensors.s1,
        "s2": record.sensors.s2,
        "m1": record.motors.m1,
        "m2": record.motors.m2,
        "m3": record.motors.m3,
        "obstacles": [{"track": o.track, "row": o.row, "dir": o.direction} for o in record.obstacles],
        "status": record.status.value,
    }
    return json.dumps(payload, separators=(",", ":"))
