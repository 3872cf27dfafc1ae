"""
Model layer tests: potentials, interactions, assumption checks, intervals and value types
Run: pytest test_models.py
"""
import math

import numpy as np
import pytest

from spacing_lab.errors import DomainError, NoSpacingsError
from spacing_lab.models import (
    Configuration,
    EmpiricalCDF,
    GaudinParams,
    Interaction,
    IntervalMode,
    IntervalSpec,
    InvariantModel,
    McmcParams,
    Normalization,
    Potential,
    RateFit,
    RepulsiveModel,
    SamplerKind,
    StudyConfig,
    check_assumptions,
    check_repulsive_assumptions,
    eval_interaction,
    eval_potential,
)
from spacing_lab.models.potential_helpers import DEFAULT_GRID_POINTS, DEFAULT_GRID_RADIUS, validation_grid


# ============================================
# POTENTIALS
# ============================================

def test_eval_potential_values():
    quadratic = Potential((0, 0, 1))
    quartic = Potential((0, 0, 0, 0, 1))
    assert eval_potential(quadratic, 1.0) == 1.0
    assert eval_potential(quadratic, 3.0, 2) == 2.0
    assert eval_potential(quartic, 2.0, 1) == 32.0


def test_eval_potential_outside_domain():
    half_line = Potential((0, 0, 1), lower=0.0)
    with pytest.raises(DomainError):
        eval_potential(half_line, -0.5)
    with pytest.raises(DomainError):
        eval_potential(half_line, 1.0, 3)


def test_potential_trims_trailing_zeros():
    p = Potential((1.0, 2.0, 0.0, 0.0))
    assert p.coefficients == (1.0, 2.0)
    assert p.degree == 1
    assert p.leading_coefficient == 2.0


def test_potential_rejects_empty_domain():
    with pytest.raises(DomainError):
        Potential((0, 0, 1), lower=1.0, upper=1.0)


def test_potential_plus_keeps_domain():
    p = Potential((0, 0, 1), lower=-3.0, upper=3.0).plus((1.0, 0.0, 0.5))
    assert p.coefficients == (1.0, 0.0, 1.5)
    assert (p.lower, p.upper) == (-3.0, 3.0)


@pytest.mark.parametrize("degree", range(1, 11))
def test_horner_matches_power_sum(degree):
    rng = np.random.default_rng(degree)
    coefficients = rng.uniform(-2.0, 2.0, size=degree + 1)
    coefficients[-1] = 1.0
    p = Potential(tuple(coefficients))
    for t in rng.uniform(-10.0, 10.0, size=200):
        powers = t ** np.arange(degree + 1)
        naive = float(np.sum(coefficients * powers))
        scale = float(np.sum(np.abs(coefficients * powers)))
        assert abs(eval_potential(p, t) - naive) <= 1e-13 * scale


def test_interaction_values():
    h = Interaction(-1.0, 1.0)
    assert eval_interaction(h, 0.0) == -1.0
    assert eval_interaction(h, 0.0, 2) == pytest.approx(1.0)
    assert h.negative_definite and not h.positive_definite
    assert eval_interaction(h, 0.7, 1) == pytest.approx(0.7 * math.exp(-0.245))


def test_interaction_requires_positive_width():
    with pytest.raises(DomainError):
        Interaction(0.5, 0.0)


@pytest.mark.parametrize("gamma, width", [(-1.0, 1.0), (0.5, 0.3), (2.0, 4.0)])
def test_interaction_is_even(gamma, width):
    h = Interaction(gamma, width)
    t = np.random.default_rng(17).uniform(-10.0, 10.0, size=1000)
    assert np.array_equal(h(t), h(-t))
    assert np.array_equal(h(t, 2), h(-t, 2))
    assert np.allclose(h(t, 1), -h(-t, 1), rtol=0.0, atol=1e-15)


# ============================================
# ASSUMPTION CHECKS
# ============================================

def test_quadratic_passes():
    report = check_assumptions(Potential((0, 0, 1)))
    assert report.passed
    assert report.min_second_derivative == pytest.approx(2.0)


@pytest.mark.parametrize("coefficients", [
    (0, 0, 1),
    (0, 0, 0, 0, 1),
    (0, 0, -2, 0, 1),
    (1.0, -1.0, 3.0, 0.5, 2.0),
    (0, 0, 0.5, 0, 0, 0, 0.1),
])
def test_reported_second_derivative_is_a_lower_bound(coefficients):
    p = Potential(coefficients)
    report = check_assumptions(p)
    grid = validation_grid(p, DEFAULT_GRID_RADIUS, DEFAULT_GRID_POINTS)
    assert np.min(p(grid, 2)) >= report.min_second_derivative - 1e-12


def test_cubic_is_not_confining():
    report = check_assumptions(Potential((0, 0, 0, 1)))
    assert not report.clauses["3"]
    assert not report.passed


def test_quartic_needs_the_monotone_derivative_clause():
    report = check_assumptions(Potential((0, 0, 0, 0, 1)))
    assert not report.clauses["2"]
    assert report.clauses["2'"]
    assert report.passed
    assert report.argmin == pytest.approx(0.0, abs=1e-9)


def test_double_well_fails():
    report = check_assumptions(Potential((0, 0, -2, 0, 1)))
    assert not report.passed


def test_dominating_f_is_reported():
    report = check_assumptions(Potential((0, 0, 1)), grid_radius=5.0, f=Potential((0, 0, 0, 0, 1)))
    assert report.warnings
    assert "2'" not in report.clauses


def test_repulsive_bound_for_positive_definite_interaction():
    q = Potential((0, 0, 1))
    assert check_repulsive_assumptions(q, Interaction(0.5, 1.0)).passed
    assert not check_repulsive_assumptions(q, Interaction(5.0, 1.0)).passed
    weak = check_repulsive_assumptions(q, Interaction(-0.1, 1.0))
    assert weak.passed and weak.warnings


# ============================================
# ENSEMBLES
# ============================================

def test_gaussian_detection():
    assert InvariantModel(Potential((0, 0, 1))).is_gaussian
    assert not InvariantModel(Potential((0, 0, 2))).is_gaussian
    assert not InvariantModel(Potential((0, 0, 1)), f=Potential((0, 1))).is_gaussian
    assert not RepulsiveModel(Potential((0, 0, 1)), Interaction(-0.1, 1.0)).is_gaussian


def test_single_particle_term():
    model = InvariantModel(Potential((0, 0, 1)), f=Potential((0, 1)))
    assert model.single_particle(2.0, 3) == pytest.approx(3 * 4.0 - 2.0)


# ============================================
# INTERVALS
# ============================================

@pytest.mark.parametrize("text, mode", [
    ("full", IntervalMode.FULL),
    ("q:0.25,0.75", IntervalMode.QUANTILE_WINDOW),
    ("loc:0,0.2", IntervalMode.LOCALIZED),
])
def test_interval_parse(text, mode):
    spec = IntervalSpec.parse(text)
    assert spec.mode is mode
    assert IntervalSpec.parse(spec.label) == spec


@pytest.mark.parametrize("text", ["q:0.8,0.2", "loc:0,-1", "window:1,2", "q:1"])
def test_interval_parse_rejects(text):
    with pytest.raises(DomainError):
        IntervalSpec.parse(text)


def test_centered_window():
    spec = IntervalSpec.centered_window(50, 200)
    assert (spec.lower * 200, spec.upper * 200) == pytest.approx((75.0, 125.0))
    with pytest.raises(DomainError):
        IntervalSpec.centered_window(300, 200)


# ============================================
# VALUE TYPES
# ============================================

def test_configuration_validation():
    Configuration([0.1, 0.2], model_tag="gue", seed=1, sampler=SamplerKind.TRIDIAGONAL)
    with pytest.raises(DomainError):
        Configuration([0.2, 0.1], model_tag="gue", seed=1, sampler=SamplerKind.TRIDIAGONAL)
    with pytest.raises(DomainError):
        Configuration([0.1, 0.1], model_tag="gue", seed=1, sampler=SamplerKind.TRIDIAGONAL)
    # clamped unfolded points may tie
    Configuration([0.0, 0.0, 1.0], model_tag="gue", seed=1, sampler=SamplerKind.TRIDIAGONAL, unfolded=True)


def test_configuration_points_are_read_only():
    x = Configuration([0.1, 0.2], model_tag="gue", seed=1, sampler=SamplerKind.MCMC)
    with pytest.raises(ValueError):
        x.points[0] = 5.0


def test_empirical_cdf_steps():
    e = EmpiricalCDF([1.0, 2.0, 4.0], denominator=3.0)
    assert e(0.5) == 0.0
    assert e(1.0) == pytest.approx(1 / 3)
    assert e.left_limit(1.0) == 0.0
    assert e(4.0) == pytest.approx(1.0)
    assert e(100.0) == pytest.approx(1.0)
    assert e.total_mass == pytest.approx(1.0)


def test_empirical_cdf_per_length_mass():
    e = EmpiricalCDF([1.0, 1.0], denominator=4.0, normalization=Normalization.PER_LENGTH)
    assert e.total_mass == pytest.approx(0.5)


def test_empirical_cdf_rejects_empty():
    with pytest.raises(NoSpacingsError):
        EmpiricalCDF([], denominator=1.0)


def test_mcmc_params():
    params = McmcParams()
    assert params.step_for(100) > 0
    assert McmcParams(initial_step=0.3).step_for(100) == 0.3
    with pytest.raises(DomainError):
        McmcParams(target_acceptance=1.5)


def test_study_config_validation(gue_model):
    spec = IntervalSpec.quantile(0.25, 0.75)
    config = StudyConfig(gue_model, sizes=(50,), intervals=(spec,), window_lengths=(10.0,), replicas=3)
    assert [s.label for s in config.intervals_for(50)] == [spec.label, IntervalSpec.centered_window(10.0, 50).label]
    assert config.gaudin == GaudinParams()
    with pytest.raises(DomainError):
        StudyConfig(gue_model, sizes=(), intervals=(spec,))
    with pytest.raises(DomainError):
        StudyConfig(gue_model, sizes=(50,))
    with pytest.raises(DomainError):
        StudyConfig(gue_model, sizes=(50,), intervals=(spec,), replicas=0)


def test_rate_fit_verdict():
    fit = RateFit(points=((0.0, 0.0),) * 3, slope=-0.5, intercept=0.0, r_squared=0.7)
    assert not fit.conclusive
    assert list(fit.as_dict())[-1] == "verdict"
