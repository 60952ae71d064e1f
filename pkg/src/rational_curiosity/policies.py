"""Curiosity scoring rules and stimulus selection.

Each policy maps (need probability, exposure) to one non-negative score
per stimulus; the agent explores the argmax. Only rankings matter for
selection, so proportionality constants are dropped.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .environment import CouplingMode
from .exceptions import DimensionError, DomainError
from .model import GrowthModel, ProbsLike, StateLike, as_exposures, as_probs, confidence


class PolicyKind(str, enum.Enum):
    RATIONAL = "rational"
    NOVELTY = "novelty"
    INFO_GAP = "info_gap"
    LEARNING_PROGRESS = "learning_progress"
    RANDOM = "random"


def _entropy_term(c: np.ndarray) -> np.ndarray:
    # -c log c, continuous extension to 0 at c = 0
    out = np.zeros_like(c)
    pos = c > 0
    out[pos] = -c[pos] * np.log(c[pos])
    return out


def score(policy, p: ProbsLike, state: StateLike, model: GrowthModel = GrowthModel()) -> np.ndarray:
    """Curiosity score of every stimulus under ``policy``."""
    policy = PolicyKind(policy)
    probs, h = as_probs(p), as_exposures(state)
    if probs.shape != h.shape:
        raise DimensionError(
            f"need distribution has {probs.size} stimuli but agent state has {h.size}")
    if policy is PolicyKind.RATIONAL:
        return probs * model.rate * np.exp(-model.rate * h)
    if policy is PolicyKind.NOVELTY:
        return np.exp(-model.rate * h)
    if policy is PolicyKind.INFO_GAP:
        return _entropy_term(confidence(model, h))
    if policy is PolicyKind.LEARNING_PROGRESS:
        return h * np.exp(-model.rate * h)
    return np.ones_like(h)


def select(scores: Sequence[float], rng: np.random.Generator) -> int:
    """Index of the highest score; ties are broken uniformly with ``rng``.

    The generator is only consumed when there is a tie.
    """
    s = np.asarray(scores, dtype=float)
    if s.size == 0:
        raise DomainError("cannot select from an empty score vector")
    best = np.flatnonzero(s == s.max())
    if best.size == 1:
        return int(best[0])
    return int(best[rng.integers(best.size)])


def _check_confidence_grid(grid) -> np.ndarray:
    c = np.asarray(grid, dtype=float)
    if c.ndim != 1:
        raise DomainError("confidence grid must be one-dimensional")
    if np.any(~np.isfinite(c)) or np.any(c < 0) or np.any(c >= 1):
        raise DomainError("confidence grid values must lie in [0, 1)")
    return c


def _coupled_shape(c: np.ndarray) -> np.ndarray:
    # h * exp(-h) rewritten in confidence terms
    return -np.log1p(-c) * (1.0 - c)


def curiosity_vs_confidence(policy, coupling, grid) -> np.ndarray:
    """Theoretical curiosity as a function of confidence.

    Returns an ``(m, 2)`` array of ``(confidence, curiosity)`` rows. For the
    rational policy the shape depends on how need probability relates to
    exposure; the other policies ignore ``coupling``.
    """
    policy, coupling = PolicyKind(policy), CouplingMode(coupling)
    c = _check_confidence_grid(grid)
    if policy is PolicyKind.RATIONAL:
        if coupling is CouplingMode.INDEPENDENT:
            omega = 1.0 - c
        elif coupling is CouplingMode.EXPOSURE_COUPLED:
            omega = _coupled_shape(c)
        else:
            omega = c * (1.0 - c)
    elif policy is PolicyKind.NOVELTY:
        omega = 1.0 - c
    elif policy is PolicyKind.INFO_GAP:
        omega = _entropy_term(c)
    elif policy is PolicyKind.LEARNING_PROGRESS:
        omega = _coupled_shape(c)
    else:
        omega = np.ones_like(c)
    return np.column_stack([c, omega])


# name -> (x axis, curiosity as a function of x)
CURVES = {
    "rational_exposure": ("exposure", lambda h: np.exp(-h)),
    "rational_confidence": ("confidence", lambda c: 1.0 - c),
    "learning_progress": ("exposure", lambda h: h * np.exp(-h)),
    "coupled_confidence": ("confidence", _coupled_shape),
    "information_gap": ("confidence", _entropy_term),
    "confidence_coupled": ("confidence", lambda c: c * (1.0 - c)),
}


def curve_grid(axis: str, resolution: int, h_max: float = 10.0) -> np.ndarray:
    """Evenly spaced grid: ``[0, h_max]`` for exposure, ``[0, 1)`` for confidence.

    The confidence grid has spacing ``1 / (resolution - 1)`` and omits the
    endpoint 1, where the coupled form is undefined.
    """
    if resolution < 2:
        raise DomainError(f"resolution must be at least 2, got {resolution}")
    if axis == "exposure":
        if not h_max > 0:
            raise DomainError("h_max must be positive")
        return np.linspace(0.0, h_max, resolution)
    return np.linspace(0.0, 1.0, resolution)[:-1]


def theoretical_curve(name: str, resolution: int = 10001, h_max: float = 10.0) -> np.ndarray:
    """``(m, 2)`` array of ``(x, curiosity)`` for one of :data:`CURVES`."""
    if name not in CURVES:
        raise KeyError(f"unknown curve {name!r}; valid names: {', '.join(sorted(CURVES))}")
    axis, fn = CURVES[name]
    x = curve_grid(axis, resolution, h_max)
    return np.column_stack([x, fn(x)])
