"""Short-term, long-term and shared memories plus attention gating."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SHORT_DIM = 8
LONG_DIM = 16
SHARED_DIM = 8
COMBINED_DIM = SHORT_DIM + LONG_DIM + SHARED_DIM
ALPHA_SHARED = 0.9


@dataclass
class MemoryBank:
    owner: int
    short_term: np.ndarray = field(default_factory=lambda: np.zeros(SHORT_DIM))
    long_term: np.ndarray = field(default_factory=lambda: np.zeros(LONG_DIM))

    def clear(self) -> None:
        self.short_term = np.zeros(SHORT_DIM)
        self.long_term = np.zeros(LONG_DIM)


@dataclass
class SharedMemory:
    values: np.ndarray = field(default_factory=lambda: np.zeros(SHARED_DIM))


def _decay_update(memory, state, weights, alpha):
    s = np.asarray(state, dtype=np.float64)
    return alpha * np.asarray(memory, dtype=np.float64) + (1.0 - alpha) * (weights @ s)


def update_short(memory, state, W_s, alpha_s: float) -> np.ndarray:
    if not 0.0 <= alpha_s <= 1.0:
        raise ValueError("alpha_s must lie in [0, 1]")
    return _decay_update(memory, state, W_s, alpha_s)


def update_long(memory, state, W_l, alpha_l: float) -> np.ndarray:
    if not 0.0 <= alpha_l <= 1.0:
        raise ValueError("alpha_l must lie in [0, 1]")
    return _decay_update(memory, state, W_l, alpha_l)


def update_shared(
    memory: SharedMemory, s1, s2, W_shared, alpha_shared: float = ALPHA_SHARED
) -> SharedMemory:
    joint = np.concatenate([np.asarray(s1, float), np.asarray(s2, float)])
    return SharedMemory(_decay_update(memory.values, joint, W_shared, alpha_shared))


def attention_gates(M_s, M_l, W_att_s, W_att_l) -> tuple[float, float]:
    """Scalar gates: ``tanh`` on the short-term block, linear on the long-term one."""
    w_s = float(np.tanh(np.dot(W_att_s, M_s)))
    w_l = float(np.dot(W_att_l, M_l))
    return w_s, w_l


def combine(M_s, M_l, shared: SharedMemory, gates: tuple[float, float]) -> np.ndarray:
    w_s, w_l = gates
    return np.concatenate(
        [w_s * np.asarray(M_s, float), w_l * np.asarray(M_l, float), shared.values]
    )
