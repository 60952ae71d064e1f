"""Rational model of curiosity.

Agents explore the stimulus whose extra exposure most increases the
expected value of their knowledge. The package provides the model
quantities, rival curiosity policies, environments that couple or
decouple need probability from exposure, a simulator, an in-silico
two-condition experiment and the regression pipeline used to analyze it.
"""

from .analysis import (BinnedCurve, ParticipantStandardizer, RegressionFit, Shape,
                       UncertaintyRegression, bin_reveal_curve, classify_shape,
                       normalize_curiosity, quadratic_fit, rescale_confidence)
from .environment import (BaseDistribution, CouplingMode, EnvironmentSpec, need_probabilities,
                          sample_stimulus, zipf_distribution)
from .exceptions import (ConfigurationError, CuriosityError, DegenerateDesignError,
                         DimensionError, DomainError)
from .experiment import (Condition, ExperimentConfig, InitialExposures, ParticipantDataset,
                         ParticipantModel, apply_exclusion, run_experiment, simulate_bonus_round,
                         simulate_main_round)
from .model import (AgentState, GrowthModel, NeedDistribution, confidence, knowledge_value,
                    marginal_value, marginal_values)
from .policies import PolicyKind, curiosity_vs_confidence, score, select
from .simulation import SimConfig, StepRecord, Trajectory, compare, run

__version__ = "0.1.0"
