"""In-silico version of the two-condition trivia experiment.

Simulated participants rate confidence and curiosity for every question
(main round), then decide which answers to reveal knowing how the bonus
quiz will be sampled (bonus round). In the confidence condition questions
they feel sure about are more likely to be quizzed; in the uniform
condition every question is equally likely.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigurationError
from .model import GrowthModel, confidence
from .simulation import check_seed

RATINGS_HEADER = ("participant_id", "condition", "question_id", "true_confidence",
                  "reported_confidence", "curiosity_rating")
REVEALS_HEADER = ("participant_id", "condition", "question_id", "reported_confidence", "revealed")

RATING_MIN, RATING_MAX = 1, 7
# maximum of c * (1 - c), used to rescale latent curiosity to [0, 1]
PEAK_UNCERTAINTY = 0.25
SAMPLING_EPS = 1e-6


class Condition(str, enum.Enum):
    CONFIDENCE = "confidence"
    UNIFORM = "uniform"


CONDITIONS = (Condition.CONFIDENCE, Condition.UNIFORM)


@dataclass(frozen=True)
class InitialExposures:
    """How much prior exposure a participant has had to each question.

    ``kind="exponential"`` draws i.i.d. exposures with the given mean; with
    mean 1 the implied confidences are uniform on [0, 1). ``kind="fixed"``
    uses ``values`` verbatim (cycled if shorter than the question count).
    """

    kind: str = "exponential"
    mean: float = 1.0
    values: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("exponential", "fixed"):
            raise ConfigurationError(f"unknown initial exposure kind {self.kind!r}",
                                     key="initial_exposures.kind")
        if self.kind == "exponential" and not (math.isfinite(self.mean) and self.mean > 0):
            raise ConfigurationError("exponential mean must be positive", key="initial_exposures.mean")
        if self.kind == "fixed":
            if not self.values:
                raise ConfigurationError("fixed exposures need values", key="initial_exposures.values")
            vals = tuple(float(v) for v in self.values)
            if any(not math.isfinite(v) or v < 0 for v in vals):
                raise ConfigurationError("fixed exposures must be non-negative",
                                         key="initial_exposures.values")
            object.__setattr__(self, "values", vals)

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "fixed":
            return np.resize(np.asarray(self.values, dtype=float), n)
        return rng.exponential(self.mean, size=n)


@dataclass(frozen=True)
class ParticipantModel:
    initial_exposures: InitialExposures = field(default_factory=InitialExposures)
    rating_noise_sd: float = 0.5
    confidence_noise_sd: float = 0.05
    reveal_steepness: float = 4.0
    reveal_threshold: float = 0.5
    wait_penalty: float = 0.1

    def __post_init__(self):
        for name in ("rating_noise_sd", "confidence_noise_sd"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigurationError(f"{name} must be non-negative", key=name)
        if not (math.isfinite(self.reveal_steepness) and self.reveal_steepness > 0):
            raise ConfigurationError("reveal_steepness must be positive", key="reveal_steepness")
        # deliberately unbounded: thresholds far outside [0, 1] force always/never revealing
        if not math.isfinite(self.reveal_threshold):
            raise ConfigurationError("reveal_threshold must be finite", key="reveal_threshold")
        if not 0 <= self.wait_penalty <= 1:
            raise ConfigurationError("wait_penalty must lie in [0, 1]", key="wait_penalty")


@dataclass(frozen=True)
class ExperimentConfig:
    n_participants: int = 200
    n_questions: int = 40
    n_bonus_sampled: int = 10
    participant: ParticipantModel = field(default_factory=ParticipantModel)
    seed: int = 0

    def __post_init__(self):
        for name in ("n_participants", "n_questions", "n_bonus_sampled"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {v!r}", key=name)
        if self.n_bonus_sampled > self.n_questions:
            raise ConfigurationError(
                f"n_bonus_sampled ({self.n_bonus_sampled}) exceeds n_questions ({self.n_questions})",
                key="n_bonus_sampled")
        object.__setattr__(self, "seed", check_seed(self.seed))


@dataclass
class MainRound:
    true_confidence: np.ndarray
    reported_confidence: np.ndarray
    curiosity_rating: np.ndarray


@dataclass
class BonusRound:
    reveal_probability: np.ndarray
    revealed: np.ndarray
    sampled: np.ndarray
    correct: np.ndarray

    @property
    def correct_count(self) -> int:
        return int(self.correct.sum())


@dataclass
class Participant:
    participant_id: int
    condition: Condition
    main: MainRound
    bonus: BonusRound

    @property
    def reveal_count(self) -> int:
        return int(self.bonus.revealed.sum())

    @property
    def bonus_correct(self) -> int:
        return self.bonus.correct_count


@dataclass
class ParticipantDataset:
    participants: List[Participant]
    n_questions: int

    def __len__(self):
        return len(self.participants)

    def by_condition(self, condition) -> "ParticipantDataset":
        condition = Condition(condition)
        return ParticipantDataset([p for p in self.participants if p.condition is condition],
                                  self.n_questions)

    def arrays(self) -> Dict[str, np.ndarray]:
        """One flat array per column, one entry per (participant, question)."""
        cols = {k: [] for k in ("participant_id", "condition", "question_id", "true_confidence",
                                "reported_confidence", "curiosity_rating", "revealed")}
        for p in self.participants:
            n = len(p.main.true_confidence)
            cols["participant_id"].append(np.full(n, p.participant_id))
            cols["condition"].append(np.full(n, p.condition.value))
            cols["question_id"].append(np.arange(n))
            cols["true_confidence"].append(p.main.true_confidence)
            cols["reported_confidence"].append(p.main.reported_confidence)
            cols["curiosity_rating"].append(p.main.curiosity_rating)
            cols["revealed"].append(p.bonus.revealed)
        if not self.participants:
            return {k: np.array([]) for k in cols}
        return {k: np.concatenate(v) for k, v in cols.items()}

    def ratings_rows(self):
        for p in self.participants:
            m = p.main
            for q in range(len(m.true_confidence)):
                yield (p.participant_id, p.condition.value, q, repr(float(m.true_confidence[q])),
                       repr(float(m.reported_confidence[q])), int(m.curiosity_rating[q]))

    def reveals_rows(self):
        for p in self.participants:
            for q in range(len(p.bonus.revealed)):
                yield (p.participant_id, p.condition.value, q,
                       repr(float(p.main.reported_confidence[q])), int(p.bonus.revealed[q]))

    def ratings_csv(self) -> str:
        return _to_csv(RATINGS_HEADER, self.ratings_rows())

    def reveals_csv(self) -> str:
        return _to_csv(REVEALS_HEADER, self.reveals_rows())


def _to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def curiosity_rating(c, model: ParticipantModel, noise=0.0) -> np.ndarray:
    """Map confidence to the 1..7 curiosity scale through ``c * (1 - c)``."""
    c = np.asarray(c, dtype=float)
    latent = c * (1.0 - c) / PEAK_UNCERTAINTY
    span = RATING_MAX - RATING_MIN
    raw = RATING_MIN + span * latent + noise
    return np.clip(_round_half_up(raw), RATING_MIN, RATING_MAX).astype(int)


def main_round_from_exposures(h: Sequence[float], model: ParticipantModel,
                              rng: np.random.Generator) -> MainRound:
    h = np.asarray(h, dtype=float)
    true_c = confidence(GrowthModel(), h)
    true_c = np.atleast_1d(true_c)
    n = true_c.size
    conf_noise = rng.normal(0.0, model.confidence_noise_sd, n) if model.confidence_noise_sd > 0 else np.zeros(n)
    reported = np.clip(true_c + conf_noise, 0.0, 1.0)
    rating_noise = rng.normal(0.0, model.rating_noise_sd, n) if model.rating_noise_sd > 0 else np.zeros(n)
    return MainRound(true_c, reported, curiosity_rating(true_c, model, rating_noise))


def simulate_main_round(model: ParticipantModel, n_questions: int,
                        rng: np.random.Generator) -> MainRound:
    """Draw prior exposures, then report noisy confidence and a curiosity rating per question."""
    h = model.initial_exposures.draw(n_questions, rng)
    return main_round_from_exposures(h, model, rng)


def _rescale_by_max(w: np.ndarray) -> np.ndarray:
    top = w.max()
    return w / top if top > 0 else np.zeros_like(w)


def latent_bonus_curiosity(main: MainRound, condition) -> np.ndarray:
    """Condition-aware curiosity in [0, 1], rescaled by the participant's maximum."""
    condition = Condition(condition)
    unknown = 1.0 - main.true_confidence
    if condition is Condition.CONFIDENCE:
        return _rescale_by_max(main.reported_confidence * unknown)
    return _rescale_by_max(unknown)


def reveal_probability(omega, model: ParticipantModel) -> np.ndarray:
    z = model.reveal_steepness * (np.asarray(omega, dtype=float) - model.reveal_threshold)
    logistic = 0.5 * (1.0 + np.tanh(0.5 * z))
    return np.clip(logistic - model.wait_penalty, 0.0, 1.0)


def weighted_sample_without_replacement(weights: Sequence[float], k: int,
                                        rng: np.random.Generator) -> np.ndarray:
    """Draw ``k`` distinct indices, renormalizing the weights after each removal."""
    w = np.array(weights, dtype=float)
    if k > w.size:
        raise ValueError(f"cannot draw {k} items from {w.size}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    picked = np.empty(k, dtype=int)
    for i in range(k):
        total = w.sum()
        if total <= 0:
            raise ValueError("not enough items with positive weight")
        cdf = np.cumsum(w / total)
        j = min(int(np.searchsorted(cdf, rng.random(), side="right")), w.size - 1)
        while w[j] == 0:
            j -= 1
        picked[i] = j
        w[j] = 0.0
    return picked


def simulate_bonus_round(main: MainRound, condition, model: ParticipantModel,
                         rng: np.random.Generator, n_bonus_sampled: int = 10) -> BonusRound:
    """Reveal decisions, then the quiz on ``n_bonus_sampled`` sampled questions."""
    condition = Condition(condition)
    p_reveal = reveal_probability(latent_bonus_curiosity(main, condition), model)
    n = p_reveal.size
    revealed = rng.random(n) < p_reveal
    if condition is Condition.CONFIDENCE:
        weights = main.reported_confidence + SAMPLING_EPS
    else:
        weights = np.ones(n)
    sampled = weighted_sample_without_replacement(weights, n_bonus_sampled, rng)
    correct = rng.random(sampled.size) < main.true_confidence[sampled]
    return BonusRound(p_reveal, revealed, sampled, correct)


def participant_rng(seed: int, condition, participant_id: int) -> np.random.Generator:
    """Independent stream per (seed, condition, participant)."""
    cond_index = CONDITIONS.index(Condition(condition))
    return np.random.default_rng(np.random.SeedSequence([seed, cond_index, participant_id]))


def run_experiment(config: ExperimentConfig) -> ParticipantDataset:
    """Simulate ``n_participants`` per condition; ids are unique across conditions."""
    if not isinstance(config, ExperimentConfig):
        raise ConfigurationError("run_experiment expects an ExperimentConfig")
    people = []
    pid = 0
    for condition in CONDITIONS:
        for _ in range(config.n_participants):
            rng = participant_rng(config.seed, condition, pid)
            main = simulate_main_round(config.participant, config.n_questions, rng)
            bonus = simulate_bonus_round(main, condition, config.participant, rng,
                                         config.n_bonus_sampled)
            people.append(Participant(pid, condition, main, bonus))
            pid += 1
    return ParticipantDataset(people, config.n_questions)


def exclusion_bounds(n_questions: int) -> Tuple[int, int]:
    """Smallest and largest reveal counts that are retained (3 and 37 for 40 questions)."""
    # integer arithmetic: 0.075 * 40 is not exactly 3 in floating point
    low = -(-75 * n_questions // 1000)
    high = 925 * n_questions // 1000
    return low, high


@dataclass
class ExclusionReport:
    low: int
    high: int
    retained: Dict[str, int]
    excluded: Dict[str, int]

    @property
    def total_excluded(self) -> int:
        return sum(self.excluded.values())

    def to_text(self) -> str:
        lines = [f"retain reveal counts in [{self.low}, {self.high}]"]
        for cond in CONDITIONS:
            lines.append(f"{cond.value}: retained={self.retained.get(cond.value, 0)} "
                         f"excluded={self.excluded.get(cond.value, 0)}")
        lines.append(f"total: retained={sum(self.retained.values())} excluded={self.total_excluded}")
        return "\n".join(lines) + "\n"


def apply_exclusion(dataset: ParticipantDataset) -> Tuple[ParticipantDataset, ExclusionReport]:
    """Drop participants who revealed too few or too many answers."""
    low, high = exclusion_bounds(dataset.n_questions)
    kept = []
    retained = {c.value: 0 for c in CONDITIONS}
    excluded = {c.value: 0 for c in CONDITIONS}
    for p in dataset.participants:
        if low <= p.reveal_count <= high:
            kept.append(p)
            retained[p.condition.value] += 1
        else:
            excluded[p.condition.value] += 1
    return ParticipantDataset(kept, dataset.n_questions), ExclusionReport(low, high, retained, excluded)
