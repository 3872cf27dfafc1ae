"""
Sampler tests: tridiagonal GUE, circular ensemble, log-density and the Metropolis chain
Run: pytest test_sampling.py
"""
import math

import numpy as np
import pytest
from scipy import stats

from spacing_lab.errors import DomainError
from spacing_lab.models import Interaction, InvariantModel, McmcParams, Potential, RepulsiveModel, SamplerKind
from spacing_lab.services import EquilibriumService, SamplingService, SpacingService
from spacing_lab.utils import derive_seed

SQRT2 = math.sqrt(2.0)


def _cdf_distance(points, measure):
    """Kolmogorov distance between the empirical CDF of points and the measure's CDF."""
    pts = np.sort(points)
    n = pts.size
    f = measure.cdf_array(pts)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return float(max(np.max(np.abs(upper - f)), np.max(np.abs(lower - f))))


# ============================================
# EXACT SAMPLERS
# ============================================

def test_gue_is_deterministic():
    assert SamplingService.sample_gue(50, seed=3) == SamplingService.sample_gue(50, seed=3)
    assert SamplingService.sample_gue(50, seed=3) != SamplingService.sample_gue(50, seed=4)


def test_gue_semicircle_moments():
    x = SamplingService.sample_gue(2000, seed=17)
    assert x.sampler is SamplerKind.TRIDIAGONAL
    assert np.mean(x.points ** 2) == pytest.approx(0.5, abs=0.02)
    assert x.points[-1] == pytest.approx(SQRT2, abs=0.05)
    assert np.all(np.diff(x.points) > 0)


def test_gue_single_point():
    assert SamplingService.sample_gue(1, seed=0).n == 1
    with pytest.raises(DomainError):
        SamplingService.sample_gue(0, seed=0)


def test_cue_phases():
    x = SamplingService.sample_cue(40, seed=9)
    assert x.n == 40
    assert x.points[0] >= 0 and x.points[-1] < 2 * math.pi
    unfolded = SamplingService.unfold_cue(x)
    assert unfolded.unfolded
    assert unfolded.points[-1] < 40
    with pytest.raises(DomainError):
        SamplingService.sample_cue(1, seed=0)


# ============================================
# LOG-DENSITY
# ============================================

def test_log_density_two_points(gue_model):
    assert SamplingService.log_density(gue_model, [-1.0, 1.0]) == pytest.approx(2 * math.log(2) - 4)


def test_log_density_degenerate(gue_model):
    assert SamplingService.log_density(gue_model, [0.3, 0.3]) == -math.inf
    half_line = InvariantModel(Potential((0, 0, 1), lower=0.0))
    assert SamplingService.log_density(half_line, [-0.1, 0.5]) == -math.inf


@pytest.mark.parametrize("model", [
    InvariantModel(Potential((0, 0, 0, 0, 0.25)), f=Potential((0, 0.5))),
    RepulsiveModel(Potential((0, 0, 1)), Interaction(-0.1, 1.0)),
])
def test_move_delta_matches_log_density(model):
    rng = np.random.default_rng(2)
    points = np.sort(rng.normal(size=12))
    for i in (0, 5, 11):
        y = points[i] + 0.1
        moved = points.copy()
        moved[i] = y
        expected = SamplingService.log_density(model, moved) - SamplingService.log_density(model, points)
        assert SamplingService.move_delta(model, points, i, y) == pytest.approx(expected, rel=1e-9, abs=1e-9)


# ============================================
# METROPOLIS
# ============================================

def test_sampler_resolution(gue_model, quartic_model):
    assert SamplingService.resolve_sampler(gue_model, None) is SamplerKind.TRIDIAGONAL
    assert SamplingService.resolve_sampler(quartic_model, None) is SamplerKind.MCMC
    with pytest.raises(DomainError):
        SamplingService.resolve_sampler(quartic_model, SamplerKind.TRIDIAGONAL)


def test_chain_is_deterministic(quartic_model):
    params = McmcParams(burn_in=50, thinning=5)
    first = SamplingService.sample(quartic_model, 10, seed=8, params=params)
    second = SamplingService.sample(quartic_model, 10, seed=8, params=params)
    assert first == second
    assert first.sampler is SamplerKind.MCMC
    assert first.acceptance_rate is not None


def test_chain_adapts_toward_target(gue_model):
    params = McmcParams(burn_in=500, thinning=50)
    x = SamplingService.run_chain(gue_model, 50, params, seed=derive_seed(1, 50, 0, 0))
    assert 0.15 <= x.acceptance_rate <= 0.35


def test_chain_follows_equilibrium(gue_model, gue_measure):
    params = McmcParams(burn_in=600, thinning=20)
    x = SamplingService.sample(gue_model, 40, seed=21, sampler=SamplerKind.MCMC, params=params)
    assert _cdf_distance(x.points, gue_measure) < 0.15


@pytest.mark.slow
def test_chain_follows_equilibrium_at_hundred(gue_model, gue_measure):
    x = SamplingService.sample(gue_model, 100, seed=22, sampler=SamplerKind.MCMC, params=McmcParams())
    assert _cdf_distance(x.points, gue_measure) < 0.1


@pytest.mark.slow
def test_repulsive_chain_follows_fixed_point():
    model = RepulsiveModel(Potential((0, 0, 1)), Interaction(-0.1, 1.0), tag="repulsive")
    _, measure, _ = EquilibriumService.repulsive_fixed_point(model.q, model.h)
    x = SamplingService.sample(model, 100, seed=31, params=McmcParams())
    assert _cdf_distance(x.points, measure) < 0.1


@pytest.mark.slow
def test_tridiagonal_and_chain_spacings_agree(gue_model, gue_measure):
    params = McmcParams()
    exact, chain = [], []
    for replica in range(200):
        for stream, (sampler, pool) in enumerate(((SamplerKind.TRIDIAGONAL, exact), (SamplerKind.MCMC, chain))):
            x = SamplingService.sample(gue_model, 50, derive_seed(5, 50, stream, replica),
                                       sampler=sampler, params=params)
            y = EquilibriumService.unfold(gue_measure, x).points
            pool.append(SpacingService.spacing_multiset((12.5, 37.5), y))
    result = stats.ks_2samp(np.concatenate(exact), np.concatenate(chain))
    assert result.statistic < 0.05
