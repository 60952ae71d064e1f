"""Environment structures and stimulus sampling.

Need probability is either fixed (independent of what the agent has
explored) or recomputed every step from the agent's exposure or
confidence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import ConfigurationError, DimensionError, DomainError
from .model import GrowthModel, NeedDistribution, StateLike, as_exposures, confidence


class CouplingMode(str, enum.Enum):
    INDEPENDENT = "independent"
    EXPOSURE_COUPLED = "exposure_coupled"
    CONFIDENCE_COUPLED = "confidence_coupled"


class BaseKind(str, enum.Enum):
    UNIFORM = "uniform"
    ZIPF = "zipf"
    CUSTOM = "custom"


@dataclass(frozen=True)
class BaseDistribution:
    """Descriptor for the fixed distribution used by independent environments."""

    kind: BaseKind = BaseKind.UNIFORM
    exponent: Optional[float] = None
    probs: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", BaseKind(self.kind))
        if self.kind is BaseKind.ZIPF:
            if self.exponent is None or not self.exponent >= 0:
                raise ConfigurationError("zipf base needs an exponent s >= 0", key="base.s")
        if self.kind is BaseKind.CUSTOM:
            if self.probs is None:
                raise ConfigurationError("custom base needs explicit probabilities", key="base.probs")
            object.__setattr__(self, "probs", tuple(float(x) for x in self.probs))

    @classmethod
    def uniform(cls):
        return cls(BaseKind.UNIFORM)

    @classmethod
    def zipf(cls, s: float):
        return cls(BaseKind.ZIPF, exponent=float(s))

    @classmethod
    def custom(cls, probs: Sequence[float]):
        return cls(BaseKind.CUSTOM, probs=tuple(probs))

    def resolve(self, n: int) -> NeedDistribution:
        if self.kind is BaseKind.UNIFORM:
            return NeedDistribution(np.full(n, 1.0 / n))
        if self.kind is BaseKind.ZIPF:
            return zipf_distribution(n, self.exponent)
        if len(self.probs) != n:
            raise ConfigurationError(
                f"custom base has {len(self.probs)} entries but n = {n}", key="base.probs")
        try:
            return NeedDistribution(self.probs)
        except DomainError as exc:
            raise ConfigurationError(str(exc), key="base.probs") from exc


@dataclass(frozen=True)
class EnvironmentSpec:
    n: int
    coupling: CouplingMode = CouplingMode.INDEPENDENT
    base: BaseDistribution = field(default_factory=BaseDistribution)
    growth: GrowthModel = field(default_factory=GrowthModel)
    smoothing: float = 1e-6

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n!r}", key="n")
        object.__setattr__(self, "n", int(self.n))
        try:
            object.__setattr__(self, "coupling", CouplingMode(self.coupling))
        except ValueError as exc:
            raise ConfigurationError(f"unknown coupling {self.coupling!r}", key="coupling") from exc
        if not self.smoothing >= 0:
            raise ConfigurationError("smoothing must be non-negative", key="smoothing")
        # fails early on a custom base of the wrong length
        object.__setattr__(self, "_base_dist", self.base.resolve(self.n))

    @property
    def base_distribution(self) -> NeedDistribution:
        return self._base_dist


def _normalize_weights(w: np.ndarray) -> NeedDistribution:
    total = w.sum()
    if total <= 0:
        # every weight zero (only reachable with smoothing = 0)
        return NeedDistribution(np.full(w.size, 1.0 / w.size))
    return NeedDistribution(w / total)


def need_probabilities(env: EnvironmentSpec, state: StateLike) -> NeedDistribution:
    """Need distribution implied by the environment for the agent's current state."""
    h = as_exposures(state)
    if h.size != env.n:
        raise DimensionError(f"environment has {env.n} stimuli but agent state has {h.size}")
    if env.coupling is CouplingMode.INDEPENDENT:
        return env.base_distribution
    if env.coupling is CouplingMode.EXPOSURE_COUPLED:
        return _normalize_weights(h + env.smoothing)
    return _normalize_weights(confidence(env.growth, h) + env.smoothing)


def sample_stimulus(p, rng: np.random.Generator) -> int:
    """Draw one stimulus index with probability ``p_k``."""
    probs = p.probs if isinstance(p, NeedDistribution) else NeedDistribution(p).probs
    # inverse-CDF on one uniform keeps exactly one draw per call
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    k = int(np.searchsorted(cdf, u, side="right"))
    # guard against u landing on the top edge through rounding
    k = min(k, probs.size - 1)
    while probs[k] == 0 and k > 0:
        k -= 1
    return k


def zipf_distribution(n: int, s: float) -> NeedDistribution:
    """``p_k`` proportional to ``(k + 1) ** -s``.

    ``s = 0`` is accepted and yields the uniform distribution.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not np.isfinite(s) or s < 0:
        raise DomainError(f"zipf exponent must be non-negative, got {s!r}")
    w = np.arange(1, n + 1, dtype=float) ** -float(s)
    return NeedDistribution(w / w.sum())
