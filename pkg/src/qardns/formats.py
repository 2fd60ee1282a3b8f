"""On-disk formats: the per-episode CSV and the run summaries."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

CSV_HEADER = "episode,agent,total_reward,steps,success,collisions,epsilon,eta,curiosity"
CSV_COLUMNS = CSV_HEADER.split(",")


class DataError(ValueError):
    """A run file exists but cannot be parsed."""


def _f(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def record_rows(record) -> list[str]:
    rows = []
    for i in range(len(record.total_reward)):
        rows.append(
            ",".join(
                [
                    str(record.episode),
                    str(i),
                    _f(record.total_reward[i]),
                    str(record.steps[i]),
                    str(int(record.success[i])),
                    str(record.collisions[i]),
                    _f(record.epsilon[i]),
                    _f(record.eta[i]),
                    _f(record.curiosity[i]),
                ]
            )
        )
    return rows


def write_episodes_csv(path: str | Path, records) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            for row in record_rows(rec):
                fh.write(row + "\n")


def read_episodes_csv(path: str | Path) -> dict[int, dict[str, list]]:
    """Parse an episodes file into per-agent column lists.

    Raises :class:`DataError` naming the first offending line.
    """
    path = Path(path)
    agents: dict[int, dict[str, list]] = {}
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise DataError(f"{path}:1: unexpected header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(CSV_COLUMNS):
                raise DataError(
                    f"{path}:{lineno}: expected {len(CSV_COLUMNS)} fields, got {len(parts)}"
                )
            try:
                episode, agent = int(parts[0]), int(parts[1])
                reward = float(parts[2])
                steps, success, collisions = int(parts[3]), int(parts[4]), int(parts[5])
                eps, eta, cur = (float(p) for p in parts[6:9])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if success not in (0, 1) or steps < 0 or collisions < 0:
                raise DataError(f"{path}:{lineno}: field out of range")
            cols = agents.setdefault(
                agent, {c: [] for c in CSV_COLUMNS if c != "agent"}
            )
            for key, value in zip(
                ("episode", "total_reward", "steps", "success", "collisions", "epsilon", "eta", "curiosity"),
                (episode, reward, steps, success, collisions, eps, eta, cur),
            ):
                cols[key].append(value)
    return agents


METRIC_LABELS = (
    "Success Rate",
    "Mean Reward",
    "Steps to Goal",
    "Reward Variance",
    "Simulation Time",
)


def format_summary(summary) -> str:
    agents = summary.agents
    lines = []

    def per_agent(fmt):
        return ", ".join(f"{fmt(a)} (Agent {a.agent})" for a in agents)

    def rate(a):
        if a.success_rate is None:
            return "n/a (0 episodes)"
        return f"{100 * a.success_rate:.1f}% ({a.successes}/{a.episodes})"

    lines.append(f"Success Rate: {per_agent(rate)}")
    lines.append(
        f"Mean Reward: {per_agent(lambda a: f'{a.mean_reward:.4f} ± {a.std_reward:.4f}')}"
    )
    lines.append(
        "Steps to Goal: "
        + per_agent(lambda a: f"{a.mean_steps:.2f}")
        + " (averaged over all episodes, unsuccessful ones at their step cap)"
    )
    lines.append(f"Reward Variance: {per_agent(lambda a: f'{a.reward_variance:.4f}')}")
    lines.append(f"Simulation Time: {summary.simulation_seconds:.1f} seconds")
    lines.append(f"Collision Rate: {per_agent(lambda a: f'{100 * a.collision_rate:.2f}%')}")
    lines.append(f"Episodes: {summary.episodes}")
    return "\n".join(lines) + "\n"


def summary_json(summary) -> str:
    payload = {
        "episodes": summary.episodes,
        "simulation_seconds": summary.simulation_seconds,
        "agents": [asdict(a) for a in summary.agents],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
