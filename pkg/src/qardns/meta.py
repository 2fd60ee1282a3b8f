"""Two-layer meta-cognitive adapter for the learning rate and curiosity.

The network maps recent reward statistics ``[mu, sigma]`` to two
adjustments.  Its own weights are trained by hill-climbing the change in the
windowed mean reward: the last adjustment direction is reinforced when the
mean improved and reversed when it got worse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PRE_CLAMP = 10.0
ADJUST_SCALE = 0.05
ETA_BOUNDS = (0.1, 1.5)
CURIOSITY_BOUNDS = (0.1, 1.5)
WEIGHT_CLIP = 5.0


@dataclass
class MetaWeights:
    W1: np.ndarray
    W2: np.ndarray
    meta_learning_rate: float = 0.01
    # cached from the most recent adjust() call, consumed by meta_update()
    last_inputs: np.ndarray = field(default_factory=lambda: np.zeros(2))
    last_pre: np.ndarray | None = None
    last_hidden: np.ndarray | None = None
    last_adjustments: np.ndarray = field(default_factory=lambda: np.zeros(2))

    @property
    def hidden_size(self) -> int:
        return int(self.W1.shape[0])

    @classmethod
    def initial(
        cls, rng: np.random.Generator, hidden_size: int = 4, lr: float = 0.01
    ) -> "MetaWeights":
        return cls(
            W1=rng.uniform(-0.1, 0.1, size=(hidden_size, 2)),
            W2=rng.uniform(-0.1, 0.1, size=(2, hidden_size)),
            meta_learning_rate=lr,
        )


def forward(W1, W2, inputs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (clamped pre-activation, hidden, adjustments)."""
    pre = np.clip(np.asarray(W1) @ np.asarray(inputs, float), -PRE_CLAMP, PRE_CLAMP)
    hidden = np.tanh(pre)
    return pre, hidden, np.asarray(W2) @ hidden


def adjust(
    mu: float,
    sigma: float,
    meta: MetaWeights,
    eta: float,
    curiosity: float,
    curiosity_ceiling: float = CURIOSITY_BOUNDS[1],
) -> tuple[float, float]:
    """Nudge ``eta`` and ``curiosity`` from the reward statistics.

    ``curiosity_ceiling`` is raised above 1.5 by stages that start with a larger
    curiosity factor.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    x = np.array([mu, sigma], dtype=np.float64)
    pre, hidden, adj = forward(meta.W1, meta.W2, x)
    meta.last_inputs = x
    meta.last_pre = pre
    meta.last_hidden = hidden
    meta.last_adjustments = adj
    new_eta = min(ETA_BOUNDS[1], max(ETA_BOUNDS[0], eta + ADJUST_SCALE * float(adj[0])))
    ceiling = max(CURIOSITY_BOUNDS[1], curiosity_ceiling)
    new_cur = min(ceiling, max(CURIOSITY_BOUNDS[0], curiosity + ADJUST_SCALE * float(adj[1])))
    return new_eta, new_cur


def meta_objective(W1, W2, inputs, direction, reward_trend: float) -> float:
    """Surrogate objective whose gradient drives :func:`meta_update`."""
    _, _, adj = forward(W1, W2, inputs)
    return float(reward_trend * np.dot(direction, adj))


def meta_gradients(
    W1, W2, inputs, direction, reward_trend: float
) -> tuple[np.ndarray, np.ndarray]:
    inputs = np.asarray(inputs, float)
    direction = np.asarray(direction, float)
    raw = np.asarray(W1) @ inputs
    pre, hidden, _ = forward(W1, W2, inputs)
    g_W2 = reward_trend * np.outer(direction, hidden)
    g_hidden = reward_trend * (np.asarray(W2).T @ direction)
    active = np.abs(raw) < PRE_CLAMP
    g_pre = g_hidden * (1.0 - hidden**2) * active
    g_W1 = np.outer(g_pre, inputs)
    return g_W1, g_W2


def meta_update(meta: MetaWeights, reward_trend: float) -> MetaWeights:
    """Gradient ascent on ``reward_trend * <sign(last adjustment), adjustments>``."""
    if reward_trend == 0.0 or meta.last_hidden is None:
        return meta
    direction = np.sign(meta.last_adjustments)
    g_W1, g_W2 = meta_gradients(meta.W1, meta.W2, meta.last_inputs, direction, reward_trend)
    lr = meta.meta_learning_rate
    meta.W1 = np.clip(meta.W1 + lr * g_W1, -WEIGHT_CLIP, WEIGHT_CLIP)
    meta.W2 = np.clip(meta.W2 + lr * g_W2, -WEIGHT_CLIP, WEIGHT_CLIP)
    return meta
