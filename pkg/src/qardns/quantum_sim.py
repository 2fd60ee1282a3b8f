"""Exact statevector simulation of the RY-only action circuit.

Outcome index ``k`` is the bit string of the register read with qubit 0 as
the most significant bit, so for two qubits ``k = 2*b0 + b1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGLE_LIMIT = 8.0 * np.pi
NORM_TOL = 1e-12


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps, n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class CircuitAngles:
    """Per-qubit RY angles, clamped to [-8*pi, 8*pi] on construction."""

    thetas: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.thetas, dtype=np.float64).reshape(-1)
        t = np.nan_to_num(t, nan=0.0, posinf=ANGLE_LIMIT, neginf=-ANGLE_LIMIT)
        object.__setattr__(self, "thetas", np.clip(t, -ANGLE_LIMIT, ANGLE_LIMIT))

    @property
    def n_qubits(self) -> int:
        return int(self.thetas.shape[0])


@dataclass(frozen=True)
class ShotCounts:
    counts: np.ndarray
    shots: int

    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.float64)


def apply_ry(state: StateVector, qubit: int, theta: float) -> StateVector:
    """Apply RY(theta) to one qubit of the register and return the new state."""
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n}-qubit register")
    # reshape so axis `qubit` is that qubit's index (qubit 0 = leading axis = MSB)
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.tensordot(ry_matrix(theta), psi, axes=([1], [qubit]))
    psi = np.moveaxis(psi, 0, qubit)
    return StateVector(psi.reshape(-1), n)


def build_action_state(angles: CircuitAngles) -> StateVector:
    state = StateVector.zero(angles.n_qubits)
    for q, theta in enumerate(angles.thetas):
        state = apply_ry(state, q, float(theta))
    return state


def exact_probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def measure(state: StateVector, shots: int, rng: np.random.Generator) -> ShotCounts:
    """Sample ``shots`` independent measurements in the computational basis."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = exact_probabilities(state)
    p = p / p.sum()
    counts = rng.multinomial(shots, p)
    return ShotCounts(counts.astype(np.int64), int(shots))
