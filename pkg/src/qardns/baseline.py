"""Tabular Q-learning comparison arm."""

from __future__ import annotations

import numpy as np

from .gridworld import Cell


def cell_index(cell: Cell, dims: Cell) -> int:
    x, y, z = cell
    return (x * dims[1] + y) * dims[2] + z


def new_qtable(dims: Cell = (10, 10, 3), n_actions: int = 6) -> np.ndarray:
    return np.zeros((dims[0] * dims[1] * dims[2], n_actions))


def baseline_step(
    table: np.ndarray,
    state: int,
    action: int,
    reward: float,
    next_state: int,
    alpha: float = 0.1,
    gamma: float = 0.9,
    terminal: bool = False,
) -> np.ndarray:
    """One-step Q-learning update, in place; returns ``table``."""
    bootstrap = 0.0 if terminal else gamma * float(np.max(table[next_state]))
    table[state, action] += alpha * (reward + bootstrap - table[state, action])
    return table


def greedy_action(table: np.ndarray, state: int) -> int:
    return int(np.argmax(table[state]))
