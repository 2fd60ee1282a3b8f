"""The 10x10x3 GridWorld with refreshed obstacles and a shaped reward."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Cell = tuple[int, int, int]

START: Cell = (0, 0, 0)

# up, down, left, right, up-z, down-z
ACTION_NAMES = ("up", "down", "left", "right", "up-z", "down-z")
MOVES: tuple[Cell, ...] = (
    (0, 1, 0),
    (0, -1, 0),
    (-1, 0, 0),
    (1, 0, 0),
    (0, 0, 1),
    (0, 0, -1),
)
N_ACTIONS = len(MOVES)

GOAL_REWARD = 8.0
OBSTACLE_REWARD = -2.0
REWARD_FLOOR = -8.0


class EpisodeFinished(RuntimeError):
    """Raised when an agent is stepped after its episode has ended."""


@dataclass(frozen=True)
class GridConfig:
    dims: Cell = (10, 10, 3)
    goal: Cell = (9, 9, 2)
    obstacle_fraction: float = 0.05
    obstacle_refresh_every: int = 100
    max_steps: int = 1000
    n_agents: int = 2

    def __post_init__(self) -> None:
        if len(self.dims) != 3 or min(self.dims) < 1:
            raise ValueError(f"dims must be three positive integers, got {self.dims}")
        if not in_bounds(self.goal, self.dims):
            raise ValueError(f"goal {self.goal} outside grid {self.dims}")
        if not 0.0 <= self.obstacle_fraction < 1.0:
            raise ValueError("obstacle_fraction must lie in [0, 1)")
        if self.n_obstacles > self.n_cells - 2:
            raise ValueError("obstacle_fraction leaves no free cells")
        if self.max_steps < 1 or self.obstacle_refresh_every < 1:
            raise ValueError("max_steps and obstacle_refresh_every must be positive")
        if self.n_agents < 1:
            raise ValueError("n_agents must be positive")

    @property
    def n_cells(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    @property
    def n_obstacles(self) -> int:
        return int(np.floor(self.obstacle_fraction * self.n_cells + 1e-9))


@dataclass
class EnvState:
    positions: list[Cell]
    obstacles: frozenset[Cell]
    step_count: int = 0
    episode_index: int = 0
    done: list[bool] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.done:
            self.done = [False] * len(self.positions)


@dataclass(frozen=True)
class StepOutcome:
    next_position: Cell
    extrinsic_reward: float
    reached_goal: bool
    collided: bool


def in_bounds(cell: Cell, dims: Cell) -> bool:
    return all(0 <= c < d for c, d in zip(cell, dims))


def manhattan_distance(pos: Cell, goal: Cell) -> int:
    return int(sum(abs(g - p) for p, g in zip(pos, goal)))


def extrinsic_reward(
    next_pos: Cell, moved_onto_obstacle: bool, config: GridConfig
) -> float:
    if tuple(next_pos) == tuple(config.goal):
        return GOAL_REWARD
    if moved_onto_obstacle:
        return OBSTACLE_REWARD
    # progress denominator: (sum of dims) - 3, i.e. the coordinate sum of the far corner
    progress = sum(next_pos) / (sum(config.dims) - 3)
    return shaped_penalty(progress, manhattan_distance(next_pos, config.goal))


def shaped_penalty(progress: float, distance: float) -> float:
    return max(REWARD_FLOOR, -0.001 + 0.08 * progress - 0.01 * distance)


def sample_obstacles(
    config: GridConfig,
    rng: np.random.Generator,
    exclude: tuple[Cell, ...] = (),
) -> frozenset[Cell]:
    """Draw ``floor(fraction * cells)`` distinct obstacle cells.

    The start cell, the goal and anything in ``exclude`` are never chosen.
    """
    n = config.n_obstacles
    if n == 0:
        return frozenset()
    forbidden = {START, tuple(config.goal), *map(tuple, exclude)}
    sx, sy, sz = config.dims
    cells = [
        (x, y, z)
        for x in range(sx)
        for y in range(sy)
        for z in range(sz)
        if (x, y, z) not in forbidden
    ]
    if n > len(cells):
        raise ValueError("not enough free cells for the requested obstacles")
    idx = rng.choice(len(cells), size=n, replace=False)
    return frozenset(cells[i] for i in sorted(idx))


def reset(state: EnvState, config: GridConfig) -> EnvState:
    """Move every agent back to the start for a new episode."""
    state.positions = [START] * config.n_agents
    state.done = [False] * config.n_agents
    state.step_count = 0
    return state


def initial_state(config: GridConfig, rng: np.random.Generator) -> EnvState:
    return EnvState(
        positions=[START] * config.n_agents,
        obstacles=sample_obstacles(config, rng),
    )


def maybe_refresh_obstacles(
    state: EnvState, config: GridConfig, rng: np.random.Generator
) -> EnvState:
    k = state.episode_index
    if k > 0 and k % config.obstacle_refresh_every == 0:
        state.obstacles = sample_obstacles(config, rng, exclude=tuple(state.positions))
    return state


def step(state: EnvState, agent: int, action: int, config: GridConfig) -> StepOutcome:
    """Move one agent by one cell and return what happened.

    Off-grid moves leave the agent in place with the ordinary distance-based
    reward; moves into an obstacle leave it in place with the collision penalty.
    """
    if not 0 <= agent < len(state.positions):
        raise ValueError(f"agent index {agent} out of range")
    if not 0 <= action < N_ACTIONS:
        raise ValueError(f"action {action} out of range")
    if state.done[agent]:
        raise EpisodeFinished(f"agent {agent} already finished this episode")
    if state.step_count >= config.max_steps:
        raise EpisodeFinished("episode step budget exhausted")

    pos = state.positions[agent]
    move = MOVES[action]
    cand = (pos[0] + move[0], pos[1] + move[1], pos[2] + move[2])
    collided = False
    if not in_bounds(cand, config.dims):
        nxt = pos
    elif cand in state.obstacles:
        nxt = pos
        collided = True
    else:
        nxt = cand
    reward = extrinsic_reward(nxt, collided, config)
    reached = nxt == tuple(config.goal)
    state.positions[agent] = nxt
    if reached:
        state.done[agent] = True
    return StepOutcome(nxt, reward, reached, collided)
