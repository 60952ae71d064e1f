import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rational_curiosity import (BaseDistribution, ConfigurationError, CouplingMode, DimensionError,
                                DomainError, EnvironmentSpec, NeedDistribution, need_probabilities,
                                sample_stimulus, zipf_distribution)


def test_independent_uniform_ignores_state():
    env = EnvironmentSpec(4)
    for h in ([0, 0, 0, 0], [5, 1, 0, 2.5]):
        assert need_probabilities(env, h).probs.tolist() == [0.25] * 4


def test_exposure_coupled_no_smoothing():
    env = EnvironmentSpec(2, CouplingMode.EXPOSURE_COUPLED, smoothing=0.0)
    assert need_probabilities(env, [1, 3]).probs == pytest.approx([0.25, 0.75], abs=1e-15)


def test_exposure_coupled_zero_state_is_uniform():
    env = EnvironmentSpec(2, "exposure_coupled")
    assert need_probabilities(env, [0, 0]).probs.tolist() == [0.5, 0.5]


def test_confidence_coupled_uses_confidence():
    env = EnvironmentSpec(2, "confidence_coupled", smoothing=0.0)
    c = 1 - np.exp(-np.array([1.0, 2.0]))
    assert need_probabilities(env, [1, 2]).probs == pytest.approx(c / c.sum(), abs=1e-15)


def test_need_probabilities_length_mismatch():
    with pytest.raises(DimensionError):
        need_probabilities(EnvironmentSpec(3), [0, 0])


@pytest.mark.parametrize("base, n", [(BaseDistribution.custom([0.5, 0.5]), 3),
                                     (BaseDistribution.custom([0.5, 0.6]), 2)])
def test_custom_base_validated(base, n):
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(n, base=base)


@pytest.mark.parametrize("n", [0, -2, 1.5, True])
def test_env_requires_positive_n(n):
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(n)


def test_zipf_examples():
    assert zipf_distribution(1, 3.0).probs.tolist() == [1.0]
    assert zipf_distribution(2, 1.0).probs == pytest.approx([2 / 3, 1 / 3], abs=1e-15)
    assert zipf_distribution(3, 0.0).probs == pytest.approx([1 / 3] * 3, abs=1e-15)


@pytest.mark.parametrize("n, s", [(0, 1.0), (3, -1.0), (-1, 1.0)])
def test_zipf_rejects_bad_arguments(n, s):
    with pytest.raises(DomainError):
        zipf_distribution(n, s)


def test_sample_degenerate():
    rng = np.random.default_rng(0)
    assert all(sample_stimulus([1.0, 0.0], rng) == 0 for _ in range(1000))
    assert all(sample_stimulus([0.0, 0.0, 1.0], rng) == 2 for _ in range(1000))


def test_sample_rejects_invalid():
    with pytest.raises(DomainError):
        sample_stimulus([0.7, 0.7], np.random.default_rng(0))


def test_sample_law_of_large_numbers():
    rng = np.random.default_rng(99)
    draws = [sample_stimulus([0.5, 0.5], rng) for _ in range(100_000)]
    assert abs(np.mean(np.array(draws) == 0) - 0.5) <= 0.01


def test_sample_chi_square():
    p = zipf_distribution(6, 1.2)
    rng = np.random.default_rng(31337)
    counts = np.bincount([sample_stimulus(p, rng) for _ in range(100_000)], minlength=6)
    _, pvalue = stats.chisquare(counts, 100_000 * p.probs)
    assert pvalue > 0.01


def test_sample_deterministic():
    a = np.random.default_rng(5)
    b = np.random.default_rng(5)
    p = [0.1, 0.2, 0.3, 0.4]
    assert [sample_stimulus(p, a) for _ in range(200)] == [sample_stimulus(p, b) for _ in range(200)]


exposures = st.integers(1, 10).flatmap(lambda n: st.lists(st.floats(0, 50), min_size=n, max_size=n))


@settings(max_examples=200, deadline=None)
@given(h=exposures, mode=st.sampled_from(list(CouplingMode)), eps=st.floats(0, 1))
def test_distributions_are_valid(h, mode, eps):
    p = need_probabilities(EnvironmentSpec(len(h), mode, smoothing=eps), h).probs
    assert np.all(p >= 0)
    assert abs(p.sum() - 1) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(h=exposures, s=st.floats(0.1, 3))
def test_independent_is_constant(h, s):
    env = EnvironmentSpec(len(h), base=BaseDistribution.zipf(s))
    assert need_probabilities(env, h) == need_probabilities(env, np.zeros(len(h)))


@settings(max_examples=200, deadline=None)
@given(h=st.lists(st.floats(0.1, 20), min_size=2, max_size=8), data=st.data())
def test_exposure_coupling_direction(h, data):
    env = EnvironmentSpec(len(h), "exposure_coupled", smoothing=1e-12)
    k = data.draw(st.integers(0, len(h) - 1))
    before = need_probabilities(env, h).probs
    h2 = list(h)
    h2[k] += data.draw(st.floats(0.5, 10))
    after = need_probabilities(env, h2).probs
    assert after[k] > before[k]
    others = [j for j in range(len(h)) if j != k]
    assert np.all(after[others] < before[others])
