"""A single Q-ARDNS agent: circuit-based action choice, intrinsic reward and
variance-modulated plasticity."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .memory import COMBINED_DIM, LONG_DIM, SHORT_DIM
from .quantum_sim import CircuitAngles, build_action_state, measure

CLIP_BOUND = 5.0
INIT_SCALE = 0.1
EPSILON_DECAY = 0.995
SIGMOID_CLAMP = 500.0
REWARD_WINDOW = 100


@dataclass
class AgentParams:
    eta: float = 0.7
    epsilon: float = 1.0
    curiosity_factor: float = 0.75
    curiosity_ceiling: float = 1.5
    beta: float = 0.1
    gamma_penalty: float = 0.01
    clip_bound: float = CLIP_BOUND
    shots: int = 16
    n_qubits: int = 3

    @property
    def n_actions(self) -> int:
        # 2-qubit compatibility mode drops the two z-moves
        return 6 if self.n_qubits == 3 else 4


@dataclass
class AgentWeights:
    W_s: np.ndarray
    W_l: np.ndarray
    W_a: np.ndarray
    W_att_s: np.ndarray
    W_att_l: np.ndarray

    @classmethod
    def initial(cls, rng: np.random.Generator, n_qubits: int = 3) -> "AgentWeights":
        def u(*shape):
            return rng.uniform(-INIT_SCALE, INIT_SCALE, size=shape)

        return cls(
            W_s=u(SHORT_DIM, 3),
            W_l=u(LONG_DIM, 3),
            W_a=u(n_qubits, COMBINED_DIM),
            W_att_s=u(SHORT_DIM),
            W_att_l=u(LONG_DIM),
        )

    def max_abs(self) -> float:
        return max(
            float(np.max(np.abs(w)))
            for w in (self.W_s, self.W_l, self.W_a, self.W_att_s, self.W_att_l)
        )


@dataclass
class RewardWindow:
    values: deque = field(default_factory=lambda: deque(maxlen=REWARD_WINDOW))

    def push(self, total_reward: float) -> None:
        self.values.append(float(total_reward))

    def __len__(self) -> int:
        return len(self.values)

    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values else 0.0

    def std(self) -> float:
        return float(np.std(self.values)) if self.values else 0.0

    def variance(self) -> float:
        return float(np.var(self.values)) if self.values else 0.0


def circuit_angles(weights: AgentWeights, memory: np.ndarray) -> CircuitAngles:
    return CircuitAngles(weights.W_a @ np.asarray(memory, float))


def greedy_distribution(counts: np.ndarray, n_actions: int) -> np.ndarray | None:
    """Empirical action probabilities from shot counts.

    Outcomes beyond the action range are folded away by renormalising over the
    valid ones; ``None`` means no shot landed on a valid outcome.
    """
    valid = np.asarray(counts[:n_actions], dtype=np.float64)
    total = valid.sum()
    if total == 0:
        return None
    return valid / total


def select_action(
    weights: AgentWeights,
    memory: np.ndarray,
    params: AgentParams,
    explore_rng: np.random.Generator,
    quantum_rng: np.random.Generator,
) -> int:
    n_actions = params.n_actions
    if explore_rng.random() < params.epsilon:
        return int(explore_rng.integers(n_actions))
    state = build_action_state(circuit_angles(weights, memory))
    shots = measure(state, params.shots, quantum_rng)
    probs = greedy_distribution(shots.counts, n_actions)
    if probs is None:
        return int(explore_rng.integers(n_actions))
    # np.argmax returns the first maximum, i.e. ties go to the lowest index
    return int(np.argmax(probs))


def intrinsic_reward(
    state,
    success_rate_0: float,
    success_rate_1: float,
    params: AgentParams,
    goal=(9, 9, 2),
) -> float:
    x, y, z = (float(v) for v in state)
    norm = min(SIGMOID_CLAMP, math.sqrt(x * x + y * y + z * z))
    novelty = 1.0 / (1.0 + math.exp(-norm))
    distance = abs(goal[0] - x) + abs(goal[1] - y) + abs(goal[2] - z)
    distance_factor = 8.0 / (1.0 + distance)
    balance_penalty = -2.0 * abs(success_rate_0 - success_rate_1)
    return float(params.curiosity_factor * novelty * distance_factor + balance_penalty)


def cooperative_bonus(prev_distances, next_distances) -> float:
    reduction = sum(p - n for p, n in zip(prev_distances, next_distances))
    return 10.0 * float(reduction)


def plasticity_delta(
    total_drive: float,
    variance: float,
    delta_state: float,
    memory: np.ndarray,
    params: AgentParams,
) -> np.ndarray:
    """The per-row weight increment before clipping."""
    divisor = max(0.5, 1.0 + params.beta * variance)
    scale = params.eta * total_drive / divisor * math.exp(-params.gamma_penalty * delta_state)
    return scale * np.asarray(memory, dtype=np.float64)


def plasticity_update(
    weights: AgentWeights,
    total_drive: float,
    variance: float,
    delta_state: float,
    memory: np.ndarray,
    params: AgentParams,
) -> AgentWeights:
    """Add the modulated memory vector to every row of the action weights."""
    if variance < 0 or delta_state < 0:
        raise ValueError("variance and delta_state must be non-negative")
    delta = plasticity_delta(total_drive, variance, delta_state, memory, params)
    W_a = weights.W_a + delta[None, :]
    np.clip(W_a, -params.clip_bound, params.clip_bound, out=W_a)
    return AgentWeights(weights.W_s, weights.W_l, W_a, weights.W_att_s, weights.W_att_l)


def decay_epsilon(epsilon: float, epsilon_min_stage: float) -> float:
    return max(epsilon_min_stage, epsilon * EPSILON_DECAY)
