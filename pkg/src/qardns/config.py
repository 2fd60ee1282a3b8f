"""Run configuration and its flat ``key=value`` file format."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

LEARNERS = ("qardns", "baseline")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    episodes: int = 5000
    seed: int = 0
    dims: tuple[int, int, int] = (10, 10, 3)
    goal: tuple[int, int, int] = (9, 9, 2)
    obstacle_fraction: float = 0.05
    obstacle_refresh_every: int = 100
    max_steps: int = 1000
    n_agents: int = 2
    n_qubits: int = 3
    shots: int = 16
    learner: str = "qardns"
    # pins epsilon for every episode; 1.0 gives the uniform-random control arm
    epsilon_fixed: float | None = None
    output_dir: str = "runs/default"
    stage_file: str | None = None

    def validate(self) -> "RunConfig":
        if self.episodes < 0:
            raise ConfigError("episodes must be >= 0")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.n_qubits not in (2, 3):
            raise ConfigError("n_qubits must be 2 or 3")
        if self.n_agents != 2:
            raise ConfigError("only n_agents = 2 is supported")
        if self.learner not in LEARNERS:
            raise ConfigError(f"learner must be one of {LEARNERS}")
        if self.epsilon_fixed is not None and not 0.0 <= self.epsilon_fixed <= 1.0:
            raise ConfigError("epsilon_fixed must lie in [0, 1]")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")
        if len(self.dims) != 3 or min(self.dims) < 1:
            raise ConfigError("dims must be three positive integers")
        if any(not 0 <= g < d for g, d in zip(self.goal, self.dims)):
            raise ConfigError(f"goal {self.goal} lies outside dims {self.dims}")
        if not 0.0 <= self.obstacle_fraction < 1.0:
            raise ConfigError("obstacle_fraction must lie in [0, 1)")
        return self

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, (tuple, list)):
                value = ",".join(str(v) for v in value)
            lines.append(f"{key}={'' if value is None else value}")
        return "\n".join(lines) + "\n"


def _coerce(name: str, raw: str):
    raw = raw.strip()
    if name in ("dims", "goal"):
        return tuple(int(v) for v in raw.split(","))
    if name in ("epsilon_fixed", "stage_file"):
        if raw == "" or raw.lower() == "none":
            return None
        return float(raw) if name == "epsilon_fixed" else raw
    if name in ("obstacle_fraction",):
        return float(raw)
    if name in ("learner", "output_dir"):
        return raw
    return int(raw)


def parse_config_text(text: str) -> dict:
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return out


def load_config_file(path: str | Path) -> dict:
    return parse_config_text(Path(path).read_text())
