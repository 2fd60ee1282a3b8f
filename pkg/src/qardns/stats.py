"""Summary statistics, Savitzky-Golay smoothing and the Mann-Whitney U test."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# untied samples up to this pooled size get an exact p-value
EXACT_P_MAX_N = 40


class ShortSeriesWarning(UserWarning):
    """Series shorter than the smoothing window; returned unsmoothed."""


@dataclass(frozen=True)
class UTestResult:
    U: float
    z: float
    p_value: float
    effect_size: float
    p_normal: float
    n1: int
    n2: int
    exact: bool

    def format_p(self) -> str:
        return "< 1e-16" if self.p_value < 1e-16 else f"{self.p_value:.6g}"


# --------------------------------------------------------------------------
# Savitzky-Golay


def _check_sg(window: int, poly_order: int) -> None:
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    if poly_order < 0 or poly_order >= window:
        raise ValueError("poly_order must satisfy 0 <= poly_order < window")


def _fit_weights(offsets: np.ndarray, poly_order: int, at: float = 0.0) -> np.ndarray:
    """Weights w such that w @ y is the least-squares polynomial value at ``at``."""
    deg = min(poly_order, len(offsets) - 1)
    A = np.vander(offsets.astype(np.float64), deg + 1, increasing=True)
    # value at `at` of the fitted polynomial = v^T (A^T A)^-1 A^T y = v^T pinv(A) y
    v = at ** np.arange(deg + 1, dtype=np.float64)
    return v @ np.linalg.pinv(A)


def savgol_coefficients(window: int, poly_order: int) -> np.ndarray:
    _check_sg(window, poly_order)
    half = window // 2
    return _fit_weights(np.arange(-half, half + 1), poly_order)


def savitzky_golay(
    series: Sequence[float], window: int = 51, poly_order: int = 2
) -> np.ndarray:
    """Smooth a series by local least-squares polynomial fits.

    Interior points use the centred window. Within ``window // 2`` of either end
    the polynomial is refit on the truncated (asymmetric) window and evaluated
    at the point itself; no padding or mirroring is invented.

    A series shorter than ``window`` is returned unchanged together with a
    :class:`ShortSeriesWarning`.
    """
    _check_sg(window, poly_order)
    y = np.asarray(series, dtype=np.float64)
    n = y.shape[0]
    if n < window:
        warnings.warn(
            f"series of length {n} shorter than window {window}; not smoothed",
            ShortSeriesWarning,
            stacklevel=2,
        )
        return y.copy()
    half = window // 2
    out = np.empty_like(y)
    coeffs = savgol_coefficients(window, poly_order)
    # correlate: out[i] = sum_j coeffs[j] * y[i - half + j]
    out[half : n - half] = np.correlate(y, coeffs, mode="valid")
    for i in list(range(half)) + list(range(n - half, n)):
        lo, hi = max(0, i - half), min(n, i + half + 1)
        w = _fit_weights(np.arange(lo, hi) - i, poly_order)
        out[i] = w @ y[lo:hi]
    return out


# --------------------------------------------------------------------------
# Mann-Whitney U


def rankdata(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties given their mean rank."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="mergesort")
    sorted_vals = values[order]
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _tie_term(values: np.ndarray) -> float:
    _, counts = np.unique(values, return_counts=True)
    counts = counts.astype(np.float64)
    return float(np.sum(counts**3 - counts))


def _u_null_counts(n1: int, n2: int) -> np.ndarray:
    """Number of rank arrangements giving each U = 0..n1*n2 (no ties).

    Standard recursion f(u; m, n) = f(u - n; m - 1, n) + f(u; m, n - 1).
    """
    # table[m][n] -> array over u
    prev = [np.zeros(1, dtype=object) for _ in range(n2 + 1)]
    for n in range(n2 + 1):
        prev[n] = np.array([1], dtype=object)  # m = 0: only U = 0
    for m in range(1, n1 + 1):
        cur = [np.array([1], dtype=object)]  # n = 0: only U = 0
        for n in range(1, n2 + 1):
            size = m * n + 1
            f = np.zeros(size, dtype=object)
            left = prev[n]  # (m-1, n), shift by n
            f[n : n + len(left)] += left
            below = cur[n - 1]  # (m, n-1)
            f[: len(below)] += below
            cur.append(f)
        prev = cur
    return prev[n2]


def exact_u_pvalue(U: float, n1: int, n2: int) -> float:
    """Two-sided exact p-value for untied samples: P(|U' - mean| >= |U - mean|)."""
    counts = _u_null_counts(n1, n2)
    total = sum(counts)
    mean = n1 * n2 / 2.0
    dev = abs(U - mean)
    u = np.arange(len(counts))
    hit = sum(c for c, uu in zip(counts, u) if abs(uu - mean) >= dev - 1e-9)
    return float(min(1.0, hit / total))


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> UTestResult:
    """Two-sided Mann-Whitney U test of ``a`` against ``b``.

    ``U`` counts the pairs in which the ``a`` value is larger, ties counting
    one half, so ``U == n1 * n2`` when ``a`` dominates completely. ``z`` is the
    continuity-corrected normal score with tie-corrected variance and the
    effect size is ``z / sqrt(n1 + n2)``. The reported p-value is exact for
    untied samples with ``n1 + n2 <= 40`` and the normal approximation
    otherwise; the latter is always available as ``p_normal``.
    """
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    n1, n2 = len(x), len(y)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be non-empty")
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)
    U = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    N = n1 + n2
    ties = _tie_term(pooled)
    var = n1 * n2 / 12.0 * ((N + 1) - (ties / (N * (N - 1)) if N > 1 else 0.0))
    d = U - n1 * n2 / 2.0
    d = math.copysign(max(abs(d) - 0.5, 0.0), d)
    z = d / math.sqrt(var) if var > 0 else 0.0
    p_normal = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
    exact = ties == 0 and N <= EXACT_P_MAX_N
    p = exact_u_pvalue(U, n1, n2) if exact else p_normal
    return UTestResult(
        U=U,
        z=z,
        p_value=p,
        effect_size=z / math.sqrt(N),
        p_normal=p_normal,
        n1=n1,
        n2=n2,
        exact=exact,
    )


# --------------------------------------------------------------------------
# run summaries


@dataclass(frozen=True)
class AgentSummary:
    agent: int
    episodes: int
    successes: int
    success_rate: float | None
    mean_reward: float
    std_reward: float
    reward_variance: float
    mean_steps: float
    collision_rate: float


def summarize_agent(
    agent: int,
    rewards: Sequence[float],
    steps: Sequence[int],
    successes: Sequence[bool],
    collisions: Sequence[int],
) -> AgentSummary:
    """Population statistics over one agent's episodes.

    Steps are averaged over all episodes, failures included at their actual
    (capped) length; collision rate is colliding steps over total steps.
    """
    r = np.asarray(rewards, dtype=np.float64)
    st = np.asarray(steps, dtype=np.int64)
    n = len(r)
    wins = int(np.sum(np.asarray(successes, dtype=bool)))
    total_steps = int(st.sum())
    return AgentSummary(
        agent=agent,
        episodes=n,
        successes=wins,
        success_rate=(wins / n) if n else None,
        mean_reward=float(r.mean()) if n else 0.0,
        std_reward=float(r.std()) if n else 0.0,
        reward_variance=float(r.var()) if n else 0.0,
        mean_steps=float(st.mean()) if n else 0.0,
        collision_rate=(int(np.sum(collisions)) / total_steps) if total_steps else 0.0,
    )


def summarize(records, n_agents: int | None = None) -> list[AgentSummary]:
    """Per-agent summaries from a sequence of episode records."""
    records = list(records)
    if n_agents is None:
        n_agents = len(records[0].total_reward) if records else 0
    return [
        summarize_agent(
            i,
            [r.total_reward[i] for r in records],
            [r.steps[i] for r in records],
            [r.success[i] for r in records],
            [r.collisions[i] for r in records],
        )
        for i in range(n_agents)
    ]
