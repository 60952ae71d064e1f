"""Confidence growth, knowledge value and the rational curiosity score.

Everything here is pure. Functions accept either the small value types
defined below or plain sequences / numpy arrays, so that hot loops in the
simulator do not pay for re-validation on every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .exceptions import DimensionError, DomainError

PROB_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class GrowthModel:
    """Bounded exponential growth of confidence with exposure.

    ``rate`` scales exposure; ``rate=1`` gives ``c = 1 - exp(-h)``.
    """

    rate: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"growth rate must be a positive finite number, got {self.rate!r}")


@dataclass(frozen=True, eq=False)
class NeedDistribution:
    """Probability that each stimulus is needed (occurs) in the future."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise DomainError("need probabilities must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DomainError("need probabilities must be finite and non-negative")
        total = probs.sum()
        if abs(total - 1.0) > PROB_SUM_ATOL:
            raise DomainError(f"need probabilities must sum to 1, got {total!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, NeedDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class AgentState:
    """Exposure (amount of interaction) per stimulus."""

    exposures: np.ndarray

    def __post_init__(self):
        h = np.array(self.exposures, dtype=float)
        if h.ndim != 1:
            raise DomainError("exposures must be a 1-d sequence")
        if not np.all(np.isfinite(h)) or np.any(h < 0):
            raise DomainError("exposures must be finite and non-negative")
        h.setflags(write=False)
        object.__setattr__(self, "exposures", h)

    @classmethod
    def fresh(cls, n: int) -> "AgentState":
        return cls(np.zeros(n))

    def __len__(self):
        return self.exposures.size

    def __eq__(self, other):
        if not isinstance(other, AgentState):
            return NotImplemented
        return np.array_equal(self.exposures, other.exposures)

    __hash__ = None

    def confidences(self, model: GrowthModel = GrowthModel()) -> np.ndarray:
        return confidence(model, self.exposures)


ProbsLike = Union[NeedDistribution, Sequence[float], np.ndarray]
StateLike = Union[AgentState, Sequence[float], np.ndarray]


def as_probs(p: ProbsLike) -> np.ndarray:
    if isinstance(p, NeedDistribution):
        return p.probs
    return NeedDistribution(p).probs


def as_exposures(state: StateLike) -> np.ndarray:
    if isinstance(state, AgentState):
        return state.exposures
    return AgentState(state).exposures


def _check_lengths(p: np.ndarray, h: np.ndarray):
    if p.shape != h.shape:
        raise DimensionError(
            f"need distribution has {p.size} stimuli but agent state has {h.size}")


def confidence(model: GrowthModel, h):
    """Probability of knowing the response after exposure ``h``.

    Works elementwise on arrays; scalars come back as ``float``.
    """
    arr = np.asarray(h, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"exposure must be non-negative, got {h!r}")
    c = -np.expm1(-model.rate * arr)
    return float(c) if c.ndim == 0 else c


def unconfidence(model: GrowthModel, h):
    """``1 - confidence(model, h)`` evaluated without cancellation."""
    arr = np.asarray(h, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"exposure must be non-negative, got {h!r}")
    u = np.exp(-model.rate * arr)
    return float(u) if u.ndim == 0 else u


def knowledge_value(p: ProbsLike, state: StateLike, model: GrowthModel = GrowthModel()) -> float:
    """Expected success on the next occurring stimulus, ``sum_k p_k c_k``."""
    probs, h = as_probs(p), as_exposures(state)
    _check_lengths(probs, h)
    return float(np.dot(probs, confidence(model, h)))


def marginal_values(p: ProbsLike, state: StateLike, model: GrowthModel = GrowthModel()) -> np.ndarray:
    """Analytic gradient of :func:`knowledge_value` with respect to every exposure."""
    probs, h = as_probs(p), as_exposures(state)
    _check_lengths(probs, h)
    return probs * model.rate * np.exp(-model.rate * h)


def marginal_value(p: ProbsLike, state: StateLike, model: GrowthModel, k: int) -> float:
    """Rational curiosity for stimulus ``k``: ``p_k * rate * exp(-rate * h_k)``."""
    probs, h = as_probs(p), as_exposures(state)
    _check_lengths(probs, h)
    if not 0 <= k < probs.size:
        raise IndexError(f"stimulus index {k} out of range for {probs.size} stimuli")
    return float(probs[k] * model.rate * math.exp(-model.rate * h[k]))
