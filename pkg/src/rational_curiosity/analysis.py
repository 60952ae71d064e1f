"""Statistical pipeline for curiosity/confidence data.

Rescale confidence to [0, 1], z-score curiosity per participant, regress
the outcome on confidence and uncertainty ``c * (1 - c)`` with
permutation p-values, bin reveal rates by confidence and classify the
resulting shape.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_consistent_length, check_is_fitted

from .exceptions import DegenerateDesignError, DimensionError, DomainError

DESIGN_COLUMNS = ("intercept", "confidence", "uncertainty")
BINS_HEADER = ("bin_center", "mean", "count")
PERMUTATION_CHUNK = 500


class Shape(str, enum.Enum):
    INVERTED_U = "InvertedU"
    DECREASING = "Decreasing"
    FLAT = "Flat"
    OTHER = "Other"


@dataclass(frozen=True)
class RegressionFit:
    intercept: float
    coef_confidence: float
    coef_uncertainty: float
    r: float
    p_confidence: float
    p_uncertainty: float
    n_obs: int

    def to_dict(self, alpha: float = 0.05) -> dict:
        d = asdict(self)
        d["shape"] = classify_shape(self, alpha).value
        return d


@dataclass
class BinnedCurve:
    bin_centers: np.ndarray
    means: np.ndarray
    counts: np.ndarray
    bin_width: float

    @property
    def defined(self) -> np.ndarray:
        """Mask of bins with at least one observation; the others have ``nan`` means."""
        return self.counts > 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(BINS_HEADER)
        for x, m, n in zip(self.bin_centers, self.means, self.counts):
            writer.writerow([repr(float(x)), repr(float(m)), int(n)])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# preprocessing

def _zscore(v: np.ndarray) -> np.ndarray:
    if v.size < 2:
        return np.zeros_like(v)
    sd = v.std(ddof=1)
    if sd == 0:
        return np.zeros_like(v)
    return (v - v.mean()) / sd


def normalize_curiosity(values, groups=None):
    """Z-score ratings within each participant (sample standard deviation).

    ``values`` is either a mapping ``participant -> ratings`` (a mapping of
    arrays is returned) or a flat array with a parallel ``groups`` array (an
    aligned array is returned). Zero-variance participants map to zeros.
    """
    if isinstance(values, Mapping):
        out = {}
        for key, ratings in values.items():
            v = np.asarray(ratings, dtype=float)
            if v.size == 0:
                raise DomainError(f"participant {key!r} has no ratings")
            out[key] = _zscore(v)
        return out
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise DomainError("ratings must be one-dimensional")
    if groups is None:
        groups = np.zeros(v.size, dtype=int)
    g = np.asarray(groups)
    if g.shape != v.shape:
        raise DimensionError("ratings and groups must have equal length")
    out = np.empty_like(v)
    for key in np.unique(g):
        mask = g == key
        out[mask] = _zscore(v[mask])
    return out


def rescale_confidence(values):
    """Map a 0-100 confidence scale onto [0, 1]."""
    v = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v < 0) or np.any(v > 100):
        raise DomainError("confidence ratings must lie in [0, 100]")
    out = v / 100.0
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# regression

def design_matrix(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    return np.column_stack([np.ones_like(c), c, c * (1.0 - c)])


def _check_rank(X: np.ndarray):
    norms = np.linalg.norm(X, axis=0)
    for j in range(X.shape[1]):
        if j == 0:
            resid_norm = norms[0]
        else:
            beta = np.linalg.lstsq(X[:, :j], X[:, j], rcond=None)[0]
            resid_norm = np.linalg.norm(X[:, j] - X[:, :j] @ beta)
        if norms[j] == 0 or resid_norm <= 1e-10 * norms[j]:
            raise DegenerateDesignError(
                f"design column {DESIGN_COLUMNS[j]!r} is collinear with the preceding columns",
                DESIGN_COLUMNS[j])


def _solve_normal(XtX: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # LAPACK gesv: LU with partial pivoting
    return np.linalg.solve(XtX, rhs)


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a, b = a - a.mean(), b - b.mean()
    denom = math.sqrt(float(a @ a) * float(b @ b))
    if denom == 0:
        return 0.0
    return float(np.clip((a @ b) / denom, -1.0, 1.0))


def permutation_pvalues(X: np.ndarray, y: np.ndarray, observed: np.ndarray, permutations: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Two-sided permutation p-values for every coefficient, ``(count + 1) / (N + 1)``.

    ``y`` is shuffled ``permutations`` times; rows of shuffles are drawn in
    fixed-size chunks so the result does not depend on memory limits.
    """
    XtX = X.T @ X
    counts = np.zeros(X.shape[1], dtype=np.int64)
    thresh = np.abs(observed) * (1 - 1e-12)
    done = 0
    while done < permutations:
        m = min(PERMUTATION_CHUNK, permutations - done)
        Y = rng.permuted(np.broadcast_to(y, (m, y.size)), axis=1)
        B = _solve_normal(XtX, X.T @ Y.T)
        counts += (np.abs(B) >= thresh[:, None]).sum(axis=1)
        done += m
    return (counts + 1) / (permutations + 1)


def quadratic_fit(y, c, permutations: int = 10000, seed: Optional[int] = 0) -> RegressionFit:
    """Least-squares fit of ``y ~ 1 + c + c(1 - c)`` with permutation p-values."""
    y = np.asarray(y, dtype=float)
    c = np.asarray(c, dtype=float)
    if y.ndim != 1 or c.ndim != 1:
        raise DomainError("y and c must be one-dimensional")
    if y.size != c.size:
        raise DimensionError(f"y has {y.size} observations but c has {c.size}")
    if y.size < 3:
        raise DomainError("need at least 3 observations")
    if np.any(~np.isfinite(c)) or np.any(c < 0) or np.any(c > 1):
        raise DomainError("confidence values must lie in [0, 1]")
    if np.any(~np.isfinite(y)):
        raise DomainError("outcomes must be finite")
    if isinstance(permutations, bool) or not isinstance(permutations, (int, np.integer)) or permutations < 1:
        raise DomainError("permutations must be a positive integer")

    X = design_matrix(c)
    _check_rank(X)
    beta = _solve_normal(X.T @ X, X.T @ y)
    r = _pearson(X @ beta, y)
    pvals = permutation_pvalues(X, y, beta, permutations, np.random.default_rng(seed))
    return RegressionFit(
        intercept=float(beta[0]), coef_confidence=float(beta[1]), coef_uncertainty=float(beta[2]),
        r=r, p_confidence=float(pvals[1]), p_uncertainty=float(pvals[2]), n_obs=int(y.size))


def classify_shape(fit: RegressionFit, alpha: float = 0.05) -> Shape:
    inverted = fit.coef_uncertainty > 0 and fit.p_uncertainty < alpha
    if inverted:
        return Shape.INVERTED_U
    if fit.coef_confidence < 0 and fit.p_confidence < alpha:
        return Shape.DECREASING
    if fit.p_confidence >= alpha and fit.p_uncertainty >= alpha:
        return Shape.FLAT
    return Shape.OTHER


# ---------------------------------------------------------------------------
# binning

def bin_edges(bin_width: float) -> np.ndarray:
    if not (math.isfinite(bin_width) and 0 < bin_width <= 1):
        raise DomainError(f"bin_width must lie in (0, 1], got {bin_width!r}")
    n_bins = math.ceil(1.0 / bin_width - 1e-9)
    # rounding keeps edges such as 3 * 0.1 equal to the literal 0.3
    edges = np.round(np.arange(n_bins + 1) * bin_width, 12)
    edges[-1] = 1.0
    return edges


def bin_reveal_curve(reveals, c, bin_width: float = 0.1) -> BinnedCurve:
    """Mean of ``reveals`` within confidence bins; the last bin is closed on the right."""
    edges = bin_edges(bin_width)
    v = np.asarray(reveals, dtype=float)
    c = np.asarray(c, dtype=float)
    if v.shape != c.shape:
        raise DimensionError("reveals and confidences must have equal length")
    if np.any(~np.isfinite(c)) or np.any(c < 0) or np.any(c > 1):
        raise DomainError("confidence values must lie in [0, 1]")
    n_bins = edges.size - 1
    idx = np.clip(np.searchsorted(edges, c, side="right") - 1, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=v, minlength=n_bins)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return BinnedCurve(centers, means, counts, float(bin_width))


# ---------------------------------------------------------------------------
# estimator API

class UncertaintyRegression(RegressorMixin, BaseEstimator):
    """Regress an outcome on confidence and uncertainty ``c * (1 - c)``.

    ``X`` holds a single column of confidences in [0, 1]. After ``fit``:
    ``intercept_``, ``coef_`` (confidence, uncertainty), ``pvalues_``,
    ``r_``, ``shape_`` and the full ``fit_`` record.
    """

    def __init__(self, n_permutations=10000, alpha=0.05, random_state=0):
        self.n_permutations = n_permutations
        self.alpha = alpha
        self.random_state = random_state

    def _confidences(self, X):
        X = check_array(X, ensure_2d=False, ensure_min_samples=1)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise DimensionError(f"expected a single confidence column, got {X.shape[1]}")
            X = X[:, 0]
        return X

    def fit(self, X, y):
        c = self._confidences(X)
        y = check_array(y, ensure_2d=False)
        check_consistent_length(c, y)
        self.fit_ = quadratic_fit(y, c, self.n_permutations, self.random_state)
        self.intercept_ = self.fit_.intercept
        self.coef_ = np.array([self.fit_.coef_confidence, self.fit_.coef_uncertainty])
        self.pvalues_ = np.array([self.fit_.p_confidence, self.fit_.p_uncertainty])
        self.r_ = self.fit_.r
        self.shape_ = classify_shape(self.fit_, self.alpha)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        c = self._confidences(X)
        return design_matrix(c)[:, 1:] @ self.coef_ + self.intercept_


class ParticipantStandardizer(TransformerMixin, BaseEstimator):
    """Per-participant z-scoring with the sample standard deviation.

    ``groups`` identifies the participant of every rating and is required
    by both ``fit`` and ``transform``.
    """

    def fit(self, X, y=None, groups=None):
        v = self._ratings(X, groups)
        g = np.asarray(groups)
        self.means_, self.scales_ = {}, {}
        for key in np.unique(g).tolist():
            vals = v[g == key]
            self.means_[key] = vals.mean()
            self.scales_[key] = vals.std(ddof=1) if vals.size > 1 else 0.0
        return self

    def transform(self, X, groups=None):
        check_is_fitted(self, "means_")
        v = self._ratings(X, groups)
        out = np.empty_like(v)
        for i, key in enumerate(np.asarray(groups).tolist()):
            if key not in self.means_:
                raise KeyError(f"participant {key!r} was not seen during fit")
            sd = self.scales_[key]
            out[i] = 0.0 if sd == 0 else (v[i] - self.means_[key]) / sd
        return out

    def fit_transform(self, X, y=None, groups=None):
        return self.fit(X, y, groups=groups).transform(X, groups=groups)

    @staticmethod
    def _ratings(X, groups):
        v = check_array(X, ensure_2d=False)
        if v.ndim == 2:
            if v.shape[1] != 1:
                raise DimensionError("expected a single column of ratings")
            v = v[:, 0]
        if groups is None:
            raise ValueError("groups is required")
        check_consistent_length(v, groups)
        return v.astype(float)
