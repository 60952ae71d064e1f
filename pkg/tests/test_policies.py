import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import grid_argmax
from rational_curiosity import (CouplingMode, DimensionError, DomainError, GrowthModel, PolicyKind,
                                curiosity_vs_confidence, score, select)
from rational_curiosity.policies import CURVES, theoretical_curve


def test_rational_scores(unit_growth):
    s = score(PolicyKind.RATIONAL, [0.5, 0.5], [0, 1], unit_growth)
    assert s == pytest.approx([0.5, 0.5 * math.exp(-1)], abs=1e-15)
    assert s[1] == pytest.approx(0.183940, abs=5e-7)


def test_novelty_scores(unit_growth):
    s = score("novelty", [0.5, 0.5], [0, 60], unit_growth)
    assert s[0] == 1.0
    assert s[1] < 1e-20


def test_info_gap_peak(unit_growth):
    # oracle: grid search of -c ln c over (0, 1)
    c_star = grid_argmax(lambda c: -c * math.log(c), 1e-4, 1 - 1e-4)
    h = -math.log(1 - c_star)
    s = score(PolicyKind.INFO_GAP, [1.0], [h], unit_growth)
    assert s[0] == pytest.approx(math.exp(-1), abs=1e-8)
    assert s[0] == pytest.approx(0.367879, abs=5e-7)


def test_info_gap_zero_confidence_is_zero(unit_growth):
    assert score(PolicyKind.INFO_GAP, [0.5, 0.5], [0, 0], unit_growth).tolist() == [0.0, 0.0]


def test_learning_progress_peak(unit_growth):
    h_star = grid_argmax(lambda h: h * math.exp(-h), 0, 10)
    assert h_star == pytest.approx(1.0, abs=1e-3)
    s = score(PolicyKind.LEARNING_PROGRESS, [1.0], [1.0], unit_growth)
    assert s[0] == pytest.approx(0.367879, abs=5e-7)


def test_random_scores_all_one(unit_growth):
    assert score("random", [0.1, 0.9], [3, 0], unit_growth).tolist() == [1.0, 1.0]


def test_score_length_mismatch(unit_growth):
    with pytest.raises(DimensionError):
        score("rational", [0.5, 0.5], [0, 0, 0], unit_growth)


def test_select_unique_max(rng):
    assert select([0.1, 0.9, 0.3], rng) == 1


def test_select_ties_are_seeded():
    picks = [select([0.5, 0.5], np.random.default_rng(s)) for s in range(50)]
    assert set(picks) == {0, 1}
    again = [select([0.5, 0.5], np.random.default_rng(s)) for s in range(50)]
    assert picks == again


def test_select_scale_invariant():
    scores = np.array([0.2, 0.7, 0.7, 0.1])
    for s in range(20):
        assert select(scores, np.random.default_rng(s)) == select(3.7 * scores, np.random.default_rng(s))


def test_select_empty():
    with pytest.raises(DomainError):
        select([], np.random.default_rng(0))


def test_select_tie_break_is_uniform():
    counts = np.bincount([select([1, 1, 1, 0], np.random.default_rng(s)) for s in range(3000)],
                         minlength=4)
    assert counts[3] == 0
    assert np.all(np.abs(counts[:3] / 3000 - 1 / 3) < 0.04)


@pytest.mark.parametrize("coupling, expected", [
    (CouplingMode.EXPOSURE_COUPLED, 1 - math.exp(-1)),
    (CouplingMode.CONFIDENCE_COUPLED, 0.5),
])
def test_curiosity_vs_confidence_peaks(coupling, expected):
    grid = np.arange(0, 10000) * 1e-4
    curve = curiosity_vs_confidence(PolicyKind.RATIONAL, coupling, grid)
    assert curve[np.argmax(curve[:, 1]), 0] == pytest.approx(expected, abs=1e-3)


def test_curiosity_vs_confidence_independent_is_decreasing():
    grid = np.linspace(0, 0.999, 500)
    curve = curiosity_vs_confidence("rational", "independent", grid)
    assert np.argmax(curve[:, 1]) == 0
    assert np.all(np.diff(curve[:, 1]) < 0)


def test_curiosity_vs_confidence_domain():
    with pytest.raises(DomainError):
        curiosity_vs_confidence("rational", "independent", [0.2, 1.0])
    with pytest.raises(DomainError):
        curiosity_vs_confidence("rational", "independent", [-0.1])


def test_peak_locations_by_grid_search():
    # oracle: independent grid search over the raw formulas
    assert grid_argmax(lambda h: h * math.exp(-2.0 * h), 0, 5) == pytest.approx(0.5, abs=1e-3)
    assert grid_argmax(lambda c: -math.log(1 - c) * (1 - c), 0, 1 - 1e-4) == pytest.approx(
        1 - math.exp(-1), abs=1e-3)
    assert grid_argmax(lambda c: -c * math.log(c), 1e-4, 1 - 1e-4) == pytest.approx(math.exp(-1), abs=1e-3)
    assert grid_argmax(lambda c: c * (1 - c), 0, 1) == pytest.approx(0.5, abs=1e-3)


@pytest.mark.parametrize("name, expected", [
    ("learning_progress", 1.0),
    ("information_gap", math.exp(-1)),
    ("coupled_confidence", 1 - math.exp(-1)),
    ("confidence_coupled", 0.5),
    ("rational_exposure", 0.0),
    ("rational_confidence", 0.0),
])
def test_theoretical_curve_peaks(name, expected):
    xy = theoretical_curve(name, 10001, 10.0)
    assert xy[np.argmax(xy[:, 1]), 0] == pytest.approx(expected, abs=1e-3)


def test_theoretical_curve_unknown():
    with pytest.raises(KeyError, match="valid names"):
        theoretical_curve("nope")
    assert len(CURVES) == 6


states = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.integers(0, 15).map(float), min_size=n, max_size=n))


@settings(max_examples=300, deadline=None)
@given(h=states)
def test_uniform_need_rational_matches_novelty(h):
    n = len(h)
    p = np.full(n, 1.0 / n)
    model = GrowthModel(1.0)
    r = score("rational", p, h, model)
    v = score("novelty", p, h, model)
    assert set(np.flatnonzero(r == r.max())) == set(np.flatnonzero(v == v.max()))
    assert np.array_equal(np.argsort(-r, kind="stable"), np.argsort(-v, kind="stable"))


@settings(max_examples=200, deadline=None)
@given(h=states, data=st.data(), scale=st.floats(0.01, 100))
def test_rational_argmax_invariant_to_scaling_need(h, data, scale):
    n = len(h)
    w = np.array(data.draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    p = w / w.sum()
    a = score("rational", p, h)
    # bypass normalization: scaled weights are not a distribution
    b = scale * p * np.exp(-np.asarray(h))
    near = lambda x: set(np.flatnonzero(np.isclose(x, x.max(), rtol=1e-12, atol=0)))
    # exact maxima of either score sit in the other's near-tie set (float noise breaks exact ties)
    assert set(np.flatnonzero(a == a.max())) <= near(b)
    assert set(np.flatnonzero(b == b.max())) <= near(a)


@settings(max_examples=200, deadline=None)
@given(h=states, policy=st.sampled_from(list(PolicyKind)), rate=st.floats(0.1, 5))
def test_scores_nonnegative_finite(h, policy, rate):
    n = len(h)
    s = score(policy, np.full(n, 1.0 / n), h, GrowthModel(rate))
    assert np.all(np.isfinite(s)) and np.all(s >= 0)
