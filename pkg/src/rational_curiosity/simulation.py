"""Explore-then-test simulation loop and policy comparison."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import List, Sequence

import numpy as np

from .environment import EnvironmentSpec, need_probabilities, sample_stimulus
from .exceptions import ConfigurationError
from .model import AgentState, confidence, knowledge_value
from .policies import PolicyKind, score, select

TRAJECTORY_HEADER = ("step", "chosen", "occurred", "reward", "knowledge_value")
MAX_SEED = 2**64 - 1


def check_seed(seed, key="seed") -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise ConfigurationError(f"{key} must be an unsigned 64-bit integer, got {seed!r}", key=key)
    return int(seed)


@dataclass(frozen=True)
class SimConfig:
    env: EnvironmentSpec
    policy: PolicyKind = PolicyKind.RATIONAL
    steps: int = 100
    exposure_increment: float = 1.0
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "policy", PolicyKind(self.policy))
        except ValueError as exc:
            raise ConfigurationError(f"unknown policy {self.policy!r}", key="policy") from exc
        if isinstance(self.steps, bool) or not isinstance(self.steps, (int, np.integer)) or self.steps < 1:
            raise ConfigurationError(f"steps must be a positive integer, got {self.steps!r}", key="steps")
        if not (math.isfinite(self.exposure_increment) and self.exposure_increment > 0):
            raise ConfigurationError("exposure_increment must be positive", key="exposure_increment")
        object.__setattr__(self, "seed", check_seed(self.seed))


@dataclass(frozen=True)
class StepRecord:
    step: int
    chosen: int
    occurred: int
    reward: int
    knowledge_value: float


@dataclass
class Trajectory:
    config: SimConfig
    records: List[StepRecord] = field(default_factory=list)
    final_state: AgentState = None

    @property
    def cumulative_reward(self) -> int:
        return sum(r.reward for r in self.records)

    @property
    def chosen(self) -> List[int]:
        return [r.chosen for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for r in self.records:
            writer.writerow([r.step, r.chosen, r.occurred, r.reward, repr(r.knowledge_value)])
        return buf.getvalue()

    def to_rows(self) -> List[dict]:
        return [dict(zip(TRAJECTORY_HEADER, (r.step, r.chosen, r.occurred, r.reward, r.knowledge_value)))
                for r in self.records]


def run(config: SimConfig) -> Trajectory:
    """Simulate ``config.steps`` explore/test rounds.

    Each step the agent explores the stimulus with the highest curiosity
    score, then nature draws an occurring stimulus from the need
    distribution (computed at the start of the step) and the agent earns a
    reward with probability equal to its confidence in that stimulus. The
    recorded knowledge value is the post-exploration expected reward under
    the same need distribution.
    """
    if not isinstance(config, SimConfig):
        raise ConfigurationError("run expects a SimConfig")
    env, growth = config.env, config.env.growth
    rng = np.random.default_rng(config.seed)
    h = np.zeros(env.n)
    traj = Trajectory(config)
    for t in range(config.steps):
        p = need_probabilities(env, h)
        chosen = select(score(config.policy, p, h, growth), rng)
        h[chosen] += config.exposure_increment
        occurred = sample_stimulus(p, rng)
        reward = int(rng.random() < confidence(growth, h[occurred]))
        traj.records.append(StepRecord(t, chosen, occurred, reward, knowledge_value(p, h, growth)))
    traj.final_state = AgentState(h)
    return traj


@dataclass(frozen=True)
class PolicySummary:
    policy: PolicyKind
    mean_cumulative_reward: float
    sd_cumulative_reward: float
    replications: int
    rewards: tuple = ()


def compare(configs: Sequence[SimConfig], replications: int) -> List[PolicySummary]:
    """Run every config ``replications`` times with seeds ``seed, seed + 1, ...``.

    Returns one summary per config, in input order. All configs must share
    the environment, step count and exposure increment.
    """
    if isinstance(replications, bool) or not isinstance(replications, (int, np.integer)) or replications < 2:
        raise ConfigurationError("replications must be an integer >= 2", key="replications")
    configs = list(configs)
    if not configs:
        raise ConfigurationError("compare needs at least one config", key="policies")
    ref = configs[0]
    for cfg in configs[1:]:
        if (cfg.env, cfg.steps, cfg.exposure_increment) != (ref.env, ref.steps, ref.exposure_increment):
            raise ConfigurationError(
                "configs passed to compare may differ only in policy and seed", key="env")
    out = []
    for cfg in configs:
        if cfg.seed + replications - 1 > MAX_SEED:
            raise ConfigurationError("seed range overflows 64 bits", key="seed")
        rewards = [run(replace(cfg, seed=cfg.seed + i)).cumulative_reward for i in range(replications)]
        arr = np.asarray(rewards, dtype=float)
        out.append(PolicySummary(cfg.policy, float(arr.mean()), float(arr.std(ddof=1)),
                                 replications, tuple(rewards)))
    return out
