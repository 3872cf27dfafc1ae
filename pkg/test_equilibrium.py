"""
Equilibrium measure tests: support endpoints, density, CDF, unfolding and the repulsive fixed point
Run: pytest test_equilibrium.py
"""
import dataclasses
import math

import numpy as np
import pytest

from config import TestingConfig
from spacing_lab.errors import DomainError, FixedPointError, NumericalError
from spacing_lab.services import equilibrium_service
from spacing_lab.models import Configuration, Interaction, Potential, SamplerKind
from spacing_lab.services import EquilibriumService, SamplingService, SpacingService
from spacing_lab.utils import gauss_legendre

SQRT2 = math.sqrt(2.0)


# ============================================
# SUPPORT ENDPOINTS
# ============================================

@pytest.mark.parametrize("coefficients, b", [
    ((0, 0, 1), SQRT2),
    ((0, 0, 0.5), 2.0),
    ((0, 0, 0, 0, 0.25), (16.0 / 3.0) ** 0.25),
])
def test_mrs_endpoints_even_fields(coefficients, b):
    a_hat, b_hat = EquilibriumService.mrs_endpoints(Potential(coefficients))
    assert a_hat == pytest.approx(-b, abs=1e-9)
    assert b_hat == pytest.approx(b, abs=1e-9)
    assert a_hat == pytest.approx(-b_hat, abs=1e-12)


def test_mrs_endpoints_shifted_field():
    # V(t) = (t - 1)^2 moves the semicircle to [1 - sqrt 2, 1 + sqrt 2]
    a, b = EquilibriumService.mrs_endpoints(Potential((1, -2, 1)))
    assert (a, b) == pytest.approx((1 - SQRT2, 1 + SQRT2), abs=1e-9)


def test_mrs_residual_on_finer_grid():
    p = Potential((0, 0.3, 1, 0, 0.2))
    a, b = EquilibriumService.mrs_endpoints(p, tol=1e-10)
    assert EquilibriumService.mrs_residual(p, a, b, theta_points=512) < 1e-9


def test_mrs_endpoints_reject_hard_edge():
    with pytest.raises(DomainError):
        EquilibriumService.mrs_endpoints(Potential((0, 0, 1), lower=-1.0, upper=1.0))


# ============================================
# DENSITY
# ============================================

def test_rescaled_density_semicircle():
    rows = EquilibriumService.rescaled_density(Potential((0, 0, 1)), -SQRT2, SQRT2)
    x, rho = rows[:, 0], rows[:, 1]
    assert np.max(np.abs(rho - 2.0 / math.pi * np.sqrt(1.0 - x * x))) < 1e-8


def test_measure_invariants(gue_measure):
    m = gue_measure
    assert m.a < m.b
    assert m.mass == pytest.approx(1.0, abs=1e-8)
    assert np.all(m.density_values >= 0)
    assert m.density_values[0] == 0.0 and m.density_values[-1] == 0.0
    assert m.cdf_values[0] == pytest.approx(0.0, abs=1e-8)
    assert m.cdf_values[-1] == pytest.approx(1.0, abs=1e-8)
    assert np.all(np.diff(m.cdf_values) >= 0)
    assert m.rescaled_density[0, 1] == 0.0 and m.rescaled_density[-1, 1] == 0.0


def test_gue_density_and_cdf(gue_measure):
    assert float(gue_measure.density_array(0.0)) == pytest.approx(SQRT2 / math.pi, abs=1e-4)
    assert EquilibriumService.cdf(gue_measure, 0.0) == pytest.approx(0.5, abs=1e-10)
    assert EquilibriumService.cdf(gue_measure, gue_measure.a - 1) == 0.0
    assert EquilibriumService.cdf(gue_measure, gue_measure.b + 1) == 1.0


def test_gue_cdf_matches_closed_form(gue_measure):
    t = np.linspace(-1.3, 1.3, 27)
    exact = 0.5 + (t * np.sqrt(2 - t * t) / 2 + np.arcsin(t / SQRT2)) / math.pi
    assert np.max(np.abs(gue_measure.cdf_array(t) - exact)) < 1e-5


def test_quartic_measure(quartic_model):
    m = EquilibriumService.measure_for(quartic_model)
    assert m.mass == pytest.approx(1.0, abs=1e-8)
    assert m.b == pytest.approx((16.0 / 3.0) ** 0.25, abs=1e-9)
    assert EquilibriumService.cdf(m, 0.0) == pytest.approx(0.5, abs=1e-10)


def test_nonconvex_field_rejected():
    with pytest.raises(DomainError):
        EquilibriumService.build_measure(Potential((0, 0, -2, 0, 1)))


# ============================================
# INVERSE AND UNFOLDING
# ============================================

def test_cdf_inverse_edges(gue_measure):
    assert EquilibriumService.cdf_inverse(gue_measure, 0.0) == gue_measure.a
    assert EquilibriumService.cdf_inverse(gue_measure, 1.0) == gue_measure.b
    assert EquilibriumService.cdf_inverse(gue_measure, 0.5) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(DomainError):
        EquilibriumService.cdf_inverse(gue_measure, 1.2)


def test_cdf_inverse_roundtrip(gue_measure):
    rng = np.random.default_rng(11)
    u = rng.uniform(0.01, 0.99, size=1000)
    back = np.array([EquilibriumService.cdf(gue_measure, EquilibriumService.cdf_inverse(gue_measure, v)) for v in u])
    assert np.max(np.abs(back - u)) < 1e-8


def test_cdf_inverse_reports_non_convergence(gue_measure):
    # one Newton step from the midpoint leaves a residual near 3e-3
    with pytest.raises(NumericalError) as excinfo:
        EquilibriumService.cdf_inverse(gue_measure, 0.3, max_iter=1)
    assert "did not converge" in str(excinfo.value)
    assert EquilibriumService.cdf_inverse(gue_measure, 0.3) == pytest.approx(-0.4521, abs=2e-3)


def test_unfold_maps_center_and_clamps(gue_measure):
    n = 4
    x = Configuration([-3.0, 0.0, 0.4, gue_measure.b + 0.3], model_tag="gue", seed=0,
                      sampler=SamplerKind.TRIDIAGONAL)
    unfolded = EquilibriumService.unfold(gue_measure, x).points
    assert unfolded[0] == 0.0
    assert unfolded[1] == pytest.approx(n / 2, abs=1e-8)
    assert unfolded[-1] == n


def test_unfolded_gue_is_uniform(gue_measure):
    x = SamplingService.sample_gue(200, seed=5)
    u = EquilibriumService.unfold(gue_measure, x).points / 200
    ecdf = SpacingService.empirical_spacing_cdf(u)
    assert np.max(np.abs(ecdf(ecdf.jumps) - ecdf.jumps)) < 0.08
    assert np.max(np.abs(ecdf.left_limit(ecdf.jumps) - ecdf.jumps)) < 0.08


# ============================================
# REPULSIVE FIXED POINT
# ============================================

def test_fixed_point_without_interaction():
    q = Potential((0, 0, 1))
    v_eff, m, report = EquilibriumService.repulsive_fixed_point(q, Interaction(0.0, 1.0))
    plain = EquilibriumService.build_measure(q)
    assert report.iterations == 1
    assert np.allclose(m.density_values, plain.density_values, atol=1e-12)
    assert v_eff.coefficients == pytest.approx(q.coefficients, abs=1e-14)


def test_fixed_point_attractive_bump():
    q = Potential((0, 0, 1))
    h = Interaction(-0.1, 1.0)
    v_eff, m, report = EquilibriumService.repulsive_fixed_point(q, h, damping=0.5, tol=1e-8)
    assert report.iterations < 50
    assert report.final_residual < 1e-8
    assert m.mass == pytest.approx(1.0, abs=1e-8)

    # recompute the field from the returned measure and rebuild
    nodes, weights = gauss_legendre(512, *report.hull)
    conv = EquilibriumService._convolution(h, nodes, weights, m.density_array(nodes))
    refit = np.polynomial.Chebyshev.fit(nodes, conv, 10, domain=list(report.hull))
    rebuilt = EquilibriumService.build_measure(
        q.plus(refit.convert(kind=np.polynomial.Polynomial).coef), validate=False
    )
    t = np.linspace(m.a + 0.05, m.b - 0.05, 101)
    assert np.max(np.abs(rebuilt.density_array(t) - m.density_array(t))) < 1e-6
    assert 0.0 < report.min_second_derivative < math.inf
    assert report.as_dict()["min_second_derivative"] == report.min_second_derivative


def test_fixed_point_rejects_nonconvex_final_field(monkeypatch):
    original = equilibrium_service.check_assumptions

    def fail_on_hull(p, *args, **kwargs):
        report = original(p, *args, **kwargs)
        if p.is_unbounded:
            return report
        return dataclasses.replace(report, min_second_derivative=-1.0,
                                   clauses={**report.clauses, "2": False, "2'": False})

    monkeypatch.setattr(equilibrium_service, "check_assumptions", fail_on_hull)
    with pytest.raises(FixedPointError) as excinfo:
        EquilibriumService.repulsive_fixed_point(Potential((0, 0, 1)), Interaction(-0.1, 1.0))
    assert "not convex" in str(excinfo.value)
    assert excinfo.value.residuals


class ShortFixedPoint(TestingConfig):
    FIXED_POINT_MAX_ITER = 1


def test_measure_for_uses_fixed_point_settings():
    from spacing_lab.models import RepulsiveModel

    model = RepulsiveModel(Potential((0, 0, 1)), Interaction(-0.1, 1.0), tag="repulsive")
    assert EquilibriumService.measure_for(model, TestingConfig()).mass == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(FixedPointError):
        EquilibriumService.measure_for(model, ShortFixedPoint())


def test_measure_for_uses_equilibrium_settings(monkeypatch, gue_model):
    seen = {}
    build = EquilibriumService.build_measure

    def recording(p, **kwargs):
        seen.update(kwargs)
        return build(p, **kwargs)

    monkeypatch.setattr(EquilibriumService, "build_measure", staticmethod(recording))
    settings = TestingConfig()
    EquilibriumService.measure_for(gue_model, settings)
    assert seen == {"n_nodes": settings.EQUILIBRIUM_NODES, "tol": settings.EQUILIBRIUM_TOL}
