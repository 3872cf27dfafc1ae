import logging
import math
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial import chebyshev as C

from ..errors import (
    DensityNegativeError,
    DomainError,
    FixedPointError,
    NumericalError,
    SolveError
)
from ..models.configuration import Configuration
from ..models.ensemble import EnsembleModel, InvariantModel
from ..models.measure import EquilibriumMeasure, FixedPointReport
from ..models.potential import Interaction, Potential
from ..models.potential_helpers import check_assumptions, convex_enough
from ..utils.quadrature import chebyshev_nodes, gauss_chebyshev, gauss_legendre, trapezoid_theta

logger = logging.getLogger(__name__)

# Constants
DEFAULT_NODES = 256
DEFAULT_TOL = 1e-10
THETA_POINTS = 128
NEWTON_MAX_ITER = 100
DENSITY_QUAD_POINTS = 64
DIAGONAL_GAP = 1e-6
MASS_TOLERANCE = 1e-8
INVERSE_TOL = 1e-10


class EquilibriumService:
    """Equilibrium measure of a polynomial external field and the maps built on it."""

    # =========================
    # Support endpoints
    # =========================
    @staticmethod
    def _mrs_system(p: Potential, c: float, r: float, theta: np.ndarray, w: np.ndarray):
        """Both endpoint integrals in t = c + r cos(theta) and their Jacobian in (c, r)."""
        cos = np.cos(theta)
        t = c + r * cos
        d1 = p(t, 1)
        d2 = p(t, 2)
        f1 = float(np.dot(w, d1))
        f2 = float(np.dot(w, t * d1))
        inner = d1 + t * d2
        jac = np.array([
            [np.dot(w, d2), np.dot(w, d2 * cos)],
            [np.dot(w, inner), np.dot(w, inner * cos)],
        ])
        return np.array([f1, f2 - 2.0 * math.pi]), jac

    @staticmethod
    def mrs_residual(p: Potential, a: float, b: float, theta_points: int = THETA_POINTS) -> float:
        theta, w = trapezoid_theta(theta_points)
        residual, _ = EquilibriumService._mrs_system(p, 0.5 * (a + b), 0.5 * (b - a), theta, w)
        return float(np.max(np.abs(residual)))

    @staticmethod
    def mrs_endpoints(p: Potential,
                      tol: float = DEFAULT_TOL,
                      theta_points: int = THETA_POINTS,
                      max_iter: int = NEWTON_MAX_ITER) -> Tuple[float, float]:
        """
        Support endpoints (a, b) of the equilibrium measure.

        Newton in the center/half-width coordinates (c, r) with backtracking,
        starting from c = 0, r = 1.

        Raises:
            SolveError: no convergence within max_iter steps
            DomainError: the support reaches the boundary of a bounded J
        """
        if tol <= 0:
            raise DomainError("tol must be positive")
        theta, w = trapezoid_theta(theta_points)
        c, r = 0.0, 1.0
        residual, jac = EquilibriumService._mrs_system(p, c, r, theta, w)
        norm = float(np.max(np.abs(residual)))

        for iteration in range(max_iter):
            if norm < tol:
                break
            try:
                step = np.linalg.solve(jac, -residual)
            except np.linalg.LinAlgError:
                raise SolveError("Singular Jacobian in endpoint solve", norm)
            if not np.all(np.isfinite(step)):
                raise SolveError("Non-finite Newton step in endpoint solve", norm)

            scale = 1.0
            while True:
                c_new, r_new = c + scale * step[0], r + scale * step[1]
                if r_new > 0:
                    res_new, jac_new = EquilibriumService._mrs_system(p, c_new, r_new, theta, w)
                    norm_new = float(np.max(np.abs(res_new)))
                    if norm_new < norm or scale < 1e-10:
                        break
                scale *= 0.5
                if scale < 1e-12:
                    raise SolveError("Backtracking failed in endpoint solve", norm)

            c, r, residual, jac, norm = c_new, r_new, res_new, jac_new, norm_new
            logger.debug(f"MRS Newton step {iteration + 1}: c = {c:.12g}, r = {r:.12g}, residual = {norm:.3e}")

        if norm >= tol:
            raise SolveError(f"Endpoint solve did not converge in {max_iter} iterations", norm)

        a, b = c - r, c + r
        if not (p.lower < a and b < p.upper):
            raise DomainError(
                f"Support [{a:.6g}, {b:.6g}] touches the boundary of J = [{p.lower}, {p.upper}]; "
                f"hard edges are not supported"
            )
        return a, b

    # =========================
    # Density
    # =========================
    @staticmethod
    def _divided_difference(p: Potential, c: float, r: float, t: np.ndarray, x: np.ndarray) -> np.ndarray:
        """h(t, x) = (W'(t) - W'(x)) / (t - x) for W(x) = V(c + r x), on a (t, x) grid."""
        tt, xx = np.meshgrid(t, x, indexing='ij')
        gap = tt - xx
        near = np.abs(gap) < DIAGONAL_GAP
        safe_gap = np.where(near, 1.0, gap)
        w1_t = r * p(c + r * tt, 1)
        w1_x = r * p(c + r * xx, 1)
        values = (w1_t - w1_x) / safe_gap
        if np.any(near):
            # integral form: mean of W'' along the segment from x to t
            u, wu = gauss_legendre(5, 0.0, 1.0)
            ti, xi = tt[near], xx[near]
            seg = xi[:, None] + u[None, :] * (ti - xi)[:, None]
            w2 = r * r * p(c + r * seg, 2)
            values[near] = w2 @ wu
        return values

    @staticmethod
    def _g_values(p: Potential, a: float, b: float, x: np.ndarray, quad_points: int) -> np.ndarray:
        c, r = 0.5 * (a + b), 0.5 * (b - a)
        t, w = gauss_chebyshev(quad_points)
        h = EquilibriumService._divided_difference(p, c, r, t, x)
        return (w @ h) / math.pi

    @staticmethod
    def rescaled_density(p: Potential,
                         a: float,
                         b: float,
                         n_nodes: int = DEFAULT_NODES,
                         quad_points: int = DENSITY_QUAD_POINTS,
                         tol: float = DEFAULT_TOL) -> np.ndarray:
        """
        Rescaled density rho on Chebyshev nodes of (-1, 1), as (x, rho) rows.

        Raises:
            DensityNegativeError: rho < -tol at some node
        """
        if n_nodes < 2:
            raise DomainError("n_nodes must be at least 2")
        x = chebyshev_nodes(n_nodes)
        g = EquilibriumService._g_values(p, a, b, x, quad_points)
        rho = np.sqrt(1.0 - x * x) * g / (2.0 * math.pi)
        worst = float(np.min(rho))
        if worst < -tol:
            idx = int(np.argmin(rho))
            raise DensityNegativeError(
                f"Rescaled density is negative ({worst:.3e}) at x = {x[idx]:.6f}; "
                f"the field is not convex enough or the endpoints are wrong"
            )
        return np.column_stack((x, np.maximum(rho, 0.0)))

    @staticmethod
    def _cdf_series(g_coefficients: np.ndarray) -> np.ndarray:
        """Cosine coefficients of sin^2(phi) g(cos phi) from the Chebyshev coefficients of g."""
        e = np.zeros(g_coefficients.size + 2)
        for k, ck in enumerate(g_coefficients):
            e[k] += 0.5 * ck
            e[k + 2] -= 0.25 * ck
            e[abs(k - 2)] -= 0.25 * ck
        return e

    @staticmethod
    def _cdf_from_series(e: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Integral of sqrt(1 - y^2) g(y) over [-1, x]."""
        phi0 = np.arccos(np.clip(x, -1.0, 1.0))
        m = np.arange(1, e.size)
        tail = np.sin(np.outer(phi0, m)) @ (e[1:] / m)
        return e[0] * (math.pi - phi0) - tail

    @staticmethod
    def build_measure(p: Potential,
                      n_nodes: int = DEFAULT_NODES,
                      tol: float = DEFAULT_TOL,
                      quad_points: int = DENSITY_QUAD_POINTS,
                      theta_points: int = THETA_POINTS,
                      validate: bool = True) -> EquilibriumMeasure:
        """
        Equilibrium measure of p: endpoints, density on [a, b] and its CDF.

        The CDF integrates the Chebyshev expansion of G in closed form, so it is
        exact up to rounding for polynomial fields.
        """
        if validate:
            report = check_assumptions(p)
            if not convex_enough(report, has_f=False):
                raise DomainError(
                    f"Potential fails the convexity assumption (min V'' = {report.min_second_derivative:.4g} "
                    f"at t = {report.argmin:.4g})"
                )
            if not report.clauses.get("3", True):
                raise DomainError("Potential is not confining on its unbounded domain")

        a, b = EquilibriumService.mrs_endpoints(p, tol, theta_points)
        c, r = 0.5 * (a + b), 0.5 * (b - a)
        rescaled = EquilibriumService.rescaled_density(p, a, b, n_nodes, quad_points, tol)
        x, rho = rescaled[:, 0], rescaled[:, 1]

        # g = G / (2 pi) is a polynomial of degree deg V - 2
        g = EquilibriumService._g_values(p, a, b, x, quad_points) / (2.0 * math.pi)
        degree = max(p.degree - 2, 0)
        coefficients = C.chebfit(x, g, min(degree, n_nodes - 1))
        e = EquilibriumService._cdf_series(coefficients)
        mass = float(e[0] * math.pi)
        if abs(mass - 1.0) > max(MASS_TOLERANCE, 100.0 * tol):
            raise NumericalError(f"Equilibrium density has mass {mass:.12f}, expected 1")
        cdf_inner = np.clip(EquilibriumService._cdf_from_series(e, x), 0.0, 1.0)
        cdf_inner = np.maximum.accumulate(cdf_inner)

        density_t = np.concatenate(([a], c + r * x, [b]))
        density = np.concatenate(([0.0], rho / r, [0.0]))
        cdf_values = np.concatenate(([0.0], cdf_inner, [1.0]))
        measure = EquilibriumMeasure(
            a=a,
            b=b,
            density_t=density_t,
            density_values=density,
            cdf_values=cdf_values,
            rescaled_x=np.concatenate(([-1.0], x, [1.0])),
            rescaled_values=np.concatenate(([0.0], rho, [0.0])),
            potential=p,
            mass=mass
        )
        logger.info(f"Equilibrium measure built: support [{a:.10g}, {b:.10g}], mass {mass:.12f}")
        return measure

    @staticmethod
    def measure_for(model: EnsembleModel, settings=None) -> EquilibriumMeasure:
        """
        Limiting measure of a model: mu_V for invariant ensembles, the fixed point for repulsive ones.

        settings is an application config object; when given, its EQUILIBRIUM_* and
        FIXED_POINT_* values replace the built-in solver defaults.
        """
        if isinstance(model, InvariantModel):
            return EquilibriumService.build_measure(model.v, **EquilibriumService.measure_options(settings))
        _, measure, _ = EquilibriumService.repulsive_fixed_point(
            model.q, model.h, **EquilibriumService.fixed_point_options(settings)
        )
        return measure

    @staticmethod
    def measure_options(settings) -> dict:
        if settings is None:
            return {}
        return {"n_nodes": settings.EQUILIBRIUM_NODES, "tol": settings.EQUILIBRIUM_TOL}

    @staticmethod
    def fixed_point_options(settings) -> dict:
        if settings is None:
            return {}
        return {
            "damping": settings.FIXED_POINT_DAMPING,
            "tol": settings.FIXED_POINT_TOL,
            "max_iter": settings.FIXED_POINT_MAX_ITER,
            "degree": settings.FIXED_POINT_DEGREE,
            "quad_points": settings.FIXED_POINT_QUAD_POINTS,
            "n_nodes": settings.EQUILIBRIUM_NODES,
            "measure_tol": settings.EQUILIBRIUM_TOL,
        }

    # =========================
    # CDF, inverse and unfolding
    # =========================
    @staticmethod
    def cdf(m: EquilibriumMeasure, t: float) -> float:
        return float(m.cdf_array(t))

    @staticmethod
    def cdf_inverse(m: EquilibriumMeasure, u: float, tol: float = INVERSE_TOL, max_iter: int = 200) -> float:
        """
        Quantile of the interpolated CDF by safeguarded Newton.

        Raises:
            DomainError: u outside [0, 1]
            NumericalError: no convergence in max_iter steps
        """
        if not 0.0 <= u <= 1.0:
            raise DomainError(f"u = {u} outside [0, 1]")
        if u == 0.0:
            return m.a
        if u == 1.0:
            return m.b

        lo, hi = m.a, m.b
        t = 0.5 * (lo + hi)
        for _ in range(max_iter):
            diff = float(m.cdf_array(t)) - u
            if abs(diff) < tol:
                return t
            if diff > 0:
                hi = t
            else:
                lo = t
            slope = float(m.cdf_slope(t))
            candidate = t - diff / slope if slope > 0 else lo - 1.0
            t = candidate if lo < candidate < hi else 0.5 * (lo + hi)
            if hi - lo < 1e-15 * max(1.0, abs(t)):
                return t
        residual = abs(float(m.cdf_array(t)) - u)
        if residual >= tol:
            raise NumericalError(
                f"CDF inversion at u = {u} did not converge in {max_iter} steps (residual {residual:.3e})"
            )
        return t

    @staticmethod
    def unfold(m: EquilibriumMeasure, x: Configuration) -> Configuration:
        """x_i -> N F(x_i), clamped to [0, N]."""
        values = np.clip(x.n * m.cdf_array(x.points), 0.0, float(x.n))
        return x.with_points(values, unfolded=True)

    # =========================
    # Repulsive systems
    # =========================
    @staticmethod
    def _convolution(h: Interaction, nodes: np.ndarray, weights: np.ndarray, density: np.ndarray) -> np.ndarray:
        """(h * mu)(x) at each node x, by Gauss-Legendre quadrature over the hull."""
        return h(nodes[:, None] - nodes[None, :]) @ (weights * density)

    @staticmethod
    def repulsive_fixed_point(q: Potential,
                              h: Interaction,
                              damping: float = 0.5,
                              tol: float = 1e-8,
                              max_iter: int = 200,
                              degree: int = 10,
                              quad_points: int = 512,
                              n_nodes: int = DEFAULT_NODES,
                              measure_tol: float = DEFAULT_TOL
                              ) -> Tuple[Potential, EquilibriumMeasure, FixedPointReport]:
        """
        Self-consistent measure mu = equilibrium measure of Q + h * mu.

        The density table on the quadrature hull is relaxed with the given
        damping; the effective field is refit to a polynomial each step so the
        invariant-ensemble machinery applies unchanged.

        Raises:
            FixedPointError: no convergence in max_iter steps, the support
                left the quadrature hull, or the converged field is not convex
        """
        if not 0.0 < damping <= 1.0:
            raise DomainError(f"damping must lie in (0, 1], got {damping}")
        if degree < 2:
            raise DomainError("effective field degree must be at least 2")

        start = EquilibriumService.build_measure(q, n_nodes=n_nodes, tol=measure_tol)
        hull = (start.a - start.half_width, start.b + start.half_width)
        nodes, weights = gauss_legendre(quad_points, *hull)
        table = start.density_array(nodes)

        residuals = []
        fit_residual = 0.0
        v_eff: Optional[Potential] = None
        measure: Optional[EquilibriumMeasure] = None
        for iteration in range(1, max_iter + 1):
            conv = EquilibriumService._convolution(h, nodes, weights, table)
            fit = Chebyshev.fit(nodes, conv, degree, domain=list(hull))
            fit_residual = float(np.max(np.abs(fit(nodes) - conv)))
            v_eff = q.plus(fit.convert(kind=Polynomial).coef)
            try:
                measure = EquilibriumService.build_measure(
                    v_eff, n_nodes=n_nodes, tol=measure_tol, validate=False
                )
            except (DomainError, DensityNegativeError, NumericalError, SolveError) as e:
                raise FixedPointError(f"Effective field became inadmissible at step {iteration}: {e}", residuals)
            if measure.a <= hull[0] or measure.b >= hull[1]:
                raise FixedPointError(
                    f"Support [{measure.a:.4g}, {measure.b:.4g}] left the quadrature hull "
                    f"[{hull[0]:.4g}, {hull[1]:.4g}]", residuals
                )

            fresh = measure.density_array(nodes)
            residual = float(np.max(np.abs(fresh - table)))
            residuals.append(residual)
            logger.debug(f"Fixed point step {iteration}: residual {residual:.3e}, fit residual {fit_residual:.3e}")
            if residual < tol:
                break
            table = (1.0 - damping) * table + damping * fresh
        else:
            raise FixedPointError(f"Fixed point did not converge in {max_iter} iterations", residuals)

        # the converged field must itself satisfy the convexity assumption on the hull
        field_report = check_assumptions(Potential(v_eff.coefficients, lower=hull[0], upper=hull[1]))
        if not convex_enough(field_report, has_f=False):
            raise FixedPointError(
                f"Converged effective field is not convex on the hull "
                f"(min V'' = {field_report.min_second_derivative:.4g} at t = {field_report.argmin:.4g})", residuals
            )

        report = FixedPointReport(
            iterations=len(residuals),
            residuals=tuple(residuals),
            fit_residual=fit_residual,
            hull=hull,
            damping=damping,
            min_second_derivative=field_report.min_second_derivative
        )
        logger.info(
            f"Repulsive fixed point converged in {report.iterations} steps "
            f"(residual {report.final_residual:.3e}), support [{measure.a:.8g}, {measure.b:.8g}]"
        )
        return v_eff, measure, report
