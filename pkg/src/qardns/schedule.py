"""Staged hyperparameter schedule."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass(frozen=True)
class StageRow:
    start: int  # first episode of the stage (0-based)
    eta: float
    epsilon_min: float
    alpha_s: float
    alpha_l: float
    alpha_shared: float
    curiosity: float
    beta: float
    gamma: float
    shots: int


# Stage labels "0-1000", "1001-2000", ... include their upper bound, so
# episode 1000 still belongs to the first stage.
DEFAULT_STAGES: tuple[StageRow, ...] = (
    StageRow(0, 1.4, 0.9, 0.7, 0.8, 0.9, 2.0, 0.1, 0.01, 16),
    StageRow(1001, 1.05, 0.6, 0.8, 0.9, 0.9, 1.5, 0.1, 0.01, 16),
    StageRow(2001, 0.84, 0.3, 0.85, 0.95, 0.9, 1.0, 0.1, 0.01, 16),
    StageRow(3001, 0.7, 0.2, 0.9, 0.98, 0.9, 1.0, 0.1, 0.01, 16),
)


class StageSchedule:
    def __init__(self, rows=DEFAULT_STAGES):
        rows = tuple(sorted(rows, key=lambda r: r.start))
        if not rows or rows[0].start != 0:
            raise ValueError("stage schedule must start at episode 0")
        if len({r.start for r in rows}) != len(rows):
            raise ValueError("duplicate stage start episodes")
        self.rows = rows

    def index(self, episode: int) -> int:
        if episode < 0:
            raise ValueError("episode must be non-negative")
        idx = 0
        for i, row in enumerate(self.rows):
            if episode >= row.start:
                idx = i
        return idx

    def __call__(self, episode: int) -> StageRow:
        return self.rows[self.index(episode)]

    @classmethod
    def from_csv(cls, path: str | Path) -> "StageSchedule":
        """Load rows from a CSV whose header names the :class:`StageRow` fields."""
        names = [f.name for f in fields(StageRow)]
        rows = []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            missing = set(names) - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"stage file {path} lacks columns {sorted(missing)}")
            for rec in reader:
                rows.append(
                    StageRow(
                        start=int(rec["start"]),
                        shots=int(rec["shots"]),
                        **{n: float(rec[n]) for n in names if n not in ("start", "shots")},
                    )
                )
        return cls(rows)


def stage_params(episode: int, schedule: StageSchedule | None = None) -> StageRow:
    return (schedule or StageSchedule())(episode)
