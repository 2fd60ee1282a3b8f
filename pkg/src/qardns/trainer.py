"""Training loop: staged schedule, per-step orchestration and metric capture."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import gridworld as gw
from .agent import (
    AgentParams,
    AgentWeights,
    RewardWindow,
    cooperative_bonus,
    decay_epsilon,
    intrinsic_reward,
    plasticity_update,
    select_action,
)
from .baseline import baseline_step, cell_index, greedy_action, new_qtable
from .config import RunConfig
from .memory import (
    SHARED_DIM,
    MemoryBank,
    SharedMemory,
    attention_gates,
    combine,
    update_long,
    update_shared,
    update_short,
)
from .meta import MetaWeights, adjust, meta_update
from .schedule import StageRow, StageSchedule
from .stats import AgentSummary, summarize


@dataclass
class EpisodeRecord:
    episode: int
    total_reward: list[float]
    steps: list[int]
    success: list[bool]
    collisions: list[int]
    epsilon: list[float]
    eta: list[float]
    curiosity: list[float]
    wall_time: float = 0.0


@dataclass
class RunSummary:
    agents: list[AgentSummary]
    episodes: int
    simulation_seconds: float


@dataclass
class QArdnsAgent:
    index: int
    weights: AgentWeights
    params: AgentParams
    meta: MetaWeights
    explore_rng: np.random.Generator
    quantum_rng: np.random.Generator
    bank: MemoryBank = None
    window: RewardWindow = field(default_factory=RewardWindow)
    last_memory: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.bank is None:
            self.bank = MemoryBank(self.index)


@dataclass
class BaselineAgent:
    index: int
    table: np.ndarray
    params: AgentParams
    explore_rng: np.random.Generator
    window: RewardWindow = field(default_factory=RewardWindow)
    alpha: float = 0.1
    gamma: float = 0.9


class Trainer:
    """Owns one run: environment, both agents and the shared memory.

    Random streams are split from the run seed so that the environment, each
    agent's exploration and each agent's circuit sampling never draw from a
    common generator.
    """

    def __init__(self, config: RunConfig, schedule: StageSchedule | None = None):
        self.config = config.validate()
        if schedule is None:
            schedule = (
                StageSchedule.from_csv(config.stage_file)
                if config.stage_file
                else StageSchedule()
            )
        self.schedule = schedule
        self.grid = gw.GridConfig(
            dims=tuple(config.dims),
            goal=tuple(config.goal),
            obstacle_fraction=config.obstacle_fraction,
            obstacle_refresh_every=config.obstacle_refresh_every,
            max_steps=config.max_steps,
            n_agents=config.n_agents,
        )
        root = np.random.SeedSequence(config.seed)
        env_seq, shared_seq, *agent_seqs = root.spawn(2 + config.n_agents)
        self.env_rng = np.random.default_rng(env_seq)
        self.env = gw.initial_state(self.grid, self.env_rng)
        shared_rng = np.random.default_rng(shared_seq)
        self.W_shared = shared_rng.uniform(-0.1, 0.1, size=(SHARED_DIM, 3 * config.n_agents))
        self.shared = SharedMemory()
        self.agents = [self._make_agent(i, seq) for i, seq in enumerate(agent_seqs)]
        self.successes = [0] * config.n_agents
        self.episodes_done = 0
        self.stage_index = -1
        self.epsilon = 1.0 if config.epsilon_fixed is None else config.epsilon_fixed

    def _make_agent(self, i: int, seq: np.random.SeedSequence):
        init_seq, explore_seq, quantum_seq, meta_seq = seq.spawn(4)
        params = AgentParams(n_qubits=self.config.n_qubits, shots=self.config.shots)
        explore = np.random.default_rng(explore_seq)
        if self.config.learner == "baseline":
            return BaselineAgent(
                i, new_qtable(self.grid.dims, params.n_actions), params, explore
            )
        return QArdnsAgent(
            index=i,
            weights=AgentWeights.initial(np.random.default_rng(init_seq), params.n_qubits),
            params=params,
            meta=MetaWeights.initial(np.random.default_rng(meta_seq)),
            explore_rng=explore,
            quantum_rng=np.random.default_rng(quantum_seq),
        )

    # ------------------------------------------------------------------

    def success_rates(self) -> list[float]:
        if self.episodes_done == 0:
            return [0.0] * len(self.agents)
        return [s / self.episodes_done for s in self.successes]

    def apply_stage(self, episode: int) -> StageRow:
        """Load stage values when ``episode`` opens a new stage."""
        idx = self.schedule.index(episode)
        row = self.schedule.rows[idx]
        if idx != self.stage_index:
            self.stage_index = idx
            for a in self.agents:
                a.params.eta = row.eta
                a.params.curiosity_factor = row.curiosity
                a.params.curiosity_ceiling = max(1.5, row.curiosity)
                a.params.beta = row.beta
                a.params.gamma_penalty = row.gamma
                if self.config.shots == 16:
                    a.params.shots = row.shots
        for a in self.agents:
            a.params.epsilon = self.epsilon
        return row

    def run_episode(self, episode: int, row: StageRow) -> EpisodeRecord:
        t0 = time.perf_counter()
        grid, env = self.grid, self.env
        n = len(self.agents)
        env.episode_index = episode
        gw.maybe_refresh_obstacles(env, grid, self.env_rng)
        # only positions reset between episodes; memories carry over
        gw.reset(env, grid)

        rates = self.success_rates()
        sr0, sr1 = rates[0], rates[-1]
        stats = [(a.window.mean(), a.window.std(), a.window.variance()) for a in self.agents]
        totals = [0.0] * n
        steps = [0] * n
        collisions = [0] * n
        goal = grid.goal

        for _ in range(grid.max_steps):
            live = [i for i in range(n) if not env.done[i]]
            if not live:
                break
            prev = list(env.positions)
            prev_d = [gw.manhattan_distance(p, goal) for p in prev]
            self.shared = update_shared(
                self.shared, prev[0], prev[-1], self.W_shared, row.alpha_shared
            )
            actions = {i: self._choose(self.agents[i], prev[i], row, stats[i]) for i in live}
            outcomes = {i: gw.step(env, i, actions[i], grid) for i in live}
            env.step_count += 1
            next_d = [gw.manhattan_distance(p, goal) for p in env.positions]
            coop = cooperative_bonus(prev_d, next_d)
            for i in live:
                out = outcomes[i]
                a = self.agents[i]
                steps[i] += 1
                collisions[i] += int(out.collided)
                b = intrinsic_reward(out.next_position, sr0, sr1, a.params, goal)
                total = out.extrinsic_reward + b + coop
                totals[i] += total
                self._learn(a, prev[i], actions[i], out, total, stats[i][2])

        record = EpisodeRecord(
            episode=episode,
            total_reward=totals,
            steps=steps,
            success=[bool(d) for d in env.done],
            collisions=collisions,
            epsilon=[a.params.epsilon for a in self.agents],
            eta=[a.params.eta for a in self.agents],
            curiosity=[a.params.curiosity_factor for a in self.agents],
        )
        record.wall_time = time.perf_counter() - t0
        return record

    def _choose(self, a, pos, row: StageRow, stat) -> int:
        if isinstance(a, BaselineAgent):
            if a.explore_rng.random() < a.params.epsilon:
                return int(a.explore_rng.integers(a.params.n_actions))
            return greedy_action(a.table, cell_index(pos, self.grid.dims))
        w = a.weights
        bank = a.bank
        bank.short_term = update_short(bank.short_term, pos, w.W_s, row.alpha_s)
        bank.long_term = update_long(bank.long_term, pos, w.W_l, row.alpha_l)
        gates = attention_gates(bank.short_term, bank.long_term, w.W_att_s, w.W_att_l)
        memory = combine(bank.short_term, bank.long_term, self.shared, gates)
        a.last_memory = memory
        mu, sigma, _ = stat
        p = a.params
        p.eta, p.curiosity_factor = adjust(
            mu, sigma, a.meta, p.eta, p.curiosity_factor, p.curiosity_ceiling
        )
        return select_action(w, memory, p, a.explore_rng, a.quantum_rng)

    def _learn(self, a, prev, action, out: gw.StepOutcome, total: float, variance: float):
        if isinstance(a, BaselineAgent):
            dims = self.grid.dims
            baseline_step(
                a.table,
                cell_index(prev, dims),
                action,
                out.extrinsic_reward,
                cell_index(out.next_position, dims),
                a.alpha,
                a.gamma,
                terminal=out.reached_goal,
            )
            return
        delta_state = float(sum((p - q) ** 2 for p, q in zip(out.next_position, prev)))
        a.weights = plasticity_update(
            a.weights, total, variance, delta_state, a.last_memory, a.params
        )

    def finish_episode(self, record: EpisodeRecord, row: StageRow) -> None:
        for i, a in enumerate(self.agents):
            old_mu = a.window.mean()
            a.window.push(record.total_reward[i])
            if isinstance(a, QArdnsAgent):
                meta_update(a.meta, a.window.mean() - old_mu)
            self.successes[i] += int(record.success[i])
        self.episodes_done += 1
        if self.config.epsilon_fixed is None:
            self.epsilon = decay_epsilon(self.epsilon, row.epsilon_min)

    def run(self, on_record=None) -> tuple[list[EpisodeRecord], RunSummary]:
        records: list[EpisodeRecord] = []
        t0 = time.perf_counter()
        for e in range(self.config.episodes):
            row = self.apply_stage(e)
            record = self.run_episode(e, row)
            self.finish_episode(record, row)
            records.append(record)
            if on_record is not None:
                on_record(record)
        elapsed = time.perf_counter() - t0
        summary = RunSummary(
            agents=summarize(records, len(self.agents)),
            episodes=len(records),
            simulation_seconds=elapsed,
        )
        return records, summary


def run_experiment(config: RunConfig, schedule: StageSchedule | None = None, on_record=None):
    return Trainer(config, schedule).run(on_record)
