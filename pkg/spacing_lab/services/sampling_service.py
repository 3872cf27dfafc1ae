import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg, stats

from ..errors import DomainError, MixingError
from ..models.configuration import Configuration, McmcParams, SamplerKind
from ..models.ensemble import EnsembleModel, InvariantModel, RepulsiveModel
from ..models.potential import Interaction, Potential
from ..utils.quadrature import chebyshev_nodes
from ..utils.seeding import generator
from .equilibrium_service import EquilibriumService

logger = logging.getLogger(__name__)

MAX_RESAMPLES = 100


class SamplingService:
    """Samplers for the eigenvalue densities of invariant ensembles and repulsive systems."""

    # =========================
    # Exact samplers
    # =========================
    @staticmethod
    def sample_gue(n: int, seed: int, tag: str = "gue") -> Configuration:
        """
        GUE eigenvalues from the beta = 2 tridiagonal model, scaled so the
        density is proportional to prod |x_i - x_j|^2 exp(-N sum x_j^2).
        """
        if n < 1:
            raise DomainError(f"n must be positive, got {n}")
        rng = generator(seed)
        scale = 1.0 / math.sqrt(2.0 * n)
        for attempt in range(MAX_RESAMPLES):
            diag = rng.standard_normal(n)
            if n == 1:
                values = diag
            else:
                off = np.sqrt(rng.chisquare(2.0 * np.arange(n - 1, 0, -1))) / math.sqrt(2.0)
                values = linalg.eigvalsh_tridiagonal(diag, off)
            points = np.sort(values) * scale
            if np.all(np.diff(points) > 0):
                return Configuration(points, model_tag=tag, seed=seed, sampler=SamplerKind.TRIDIAGONAL)
            logger.debug(f"Tied eigenvalues in GUE sample (attempt {attempt + 1}), resampling")
        raise MixingError(f"Could not draw a GUE sample without ties in {MAX_RESAMPLES} attempts")

    @staticmethod
    def sample_cue(n: int, seed: int, tag: str = "cue") -> Configuration:
        """Eigenphases in [0, 2 pi) of a Haar-distributed unitary matrix."""
        if n < 2:
            raise DomainError(f"the circular ensemble needs n >= 2, got {n}")
        rng = generator(seed)
        for _ in range(MAX_RESAMPLES):
            u = np.atleast_2d(stats.unitary_group.rvs(n, random_state=rng))
            phases = np.sort(np.mod(np.angle(np.linalg.eigvals(u)), 2.0 * math.pi))
            if np.all(np.diff(phases) > 0):
                return Configuration(phases, model_tag=tag, seed=seed, sampler=SamplerKind.CUE)
        raise MixingError(f"Could not draw a CUE sample without ties in {MAX_RESAMPLES} attempts")

    @staticmethod
    def unfold_cue(x: Configuration) -> Configuration:
        """theta -> N theta / (2 pi), unit mean spacing on the circle."""
        return x.with_points(x.n * x.points / (2.0 * math.pi), unfolded=True)

    # =========================
    # Log-density
    # =========================
    @staticmethod
    def log_density(model: EnsembleModel, x) -> float:
        """
        Unnormalized log of the joint density at x (any order).

        Returns -inf when a point lies outside J or two points coincide.
        """
        pts = np.asarray(x, dtype=float)
        n = pts.size
        lower, upper = model.domain
        if np.any(pts < lower) or np.any(pts > upper):
            return -math.inf
        iu = np.triu_indices(n, k=1)
        diffs = (pts[:, None] - pts[None, :])[iu]
        if np.any(diffs == 0):
            return -math.inf
        value = 2.0 * math.fsum(np.log(np.abs(diffs)))
        value -= math.fsum(model.single_particle(pts, n))
        value -= math.fsum(model.pair(diffs))
        return value

    @staticmethod
    def move_delta(model: EnsembleModel, points: np.ndarray, i: int, y: float) -> float:
        """Change in log-density when particle i moves to y, in O(N)."""
        n = points.size
        old = points[i]
        others = np.delete(points, i)
        d_new = y - others
        d_old = old - others
        if np.any(d_new == 0):
            return -math.inf
        delta = 2.0 * float(np.sum(np.log(np.abs(d_new)) - np.log(np.abs(d_old))))
        delta -= float(model.single_particle(y, n) - model.single_particle(old, n))
        if isinstance(model, RepulsiveModel) and not model.h.vanishes:
            delta -= float(np.sum(model.pair(d_new) - model.pair(d_old)))
        return delta

    # =========================
    # Metropolis
    # =========================
    @staticmethod
    def initial_state(model: EnsembleModel, n: int) -> np.ndarray:
        """Chebyshev points spread over the support of the confining field."""
        a, b = EquilibriumService.mrs_endpoints(model.confining)
        return 0.5 * (a + b) + 0.5 * (b - a) * chebyshev_nodes(n)

    @staticmethod
    def _sweep(model, points, step, rng, lower, upper) -> int:
        n = points.size
        moves = rng.integers(0, n, size=n)
        kicks = rng.standard_normal(n) * step
        log_u = np.log(rng.random(n))
        accepted = 0
        for i, kick, lu in zip(moves, kicks, log_u):
            y = points[i] + kick
            if not lower <= y <= upper:
                continue
            if lu < SamplingService.move_delta(model, points, i, y):
                points[i] = y
                accepted += 1
        return accepted

    @staticmethod
    def run_chain(model: EnsembleModel, n: int, params: McmcParams, seed: int) -> Configuration:
        """
        Single-particle random-walk Metropolis; one retained state after
        burn-in and thinning sweeps. The step adapts during burn-in only.

        Raises:
            MixingError: no move accepted after adaptation
        """
        if n < 2:
            raise DomainError(f"MCMC needs n >= 2, got {n}")
        rng = generator(seed)
        lower, upper = model.domain
        points = SamplingService.initial_state(model, n)
        log_step = math.log(params.step_for(n))

        for sweep in range(params.burn_in):
            rate = SamplingService._sweep(model, points, math.exp(log_step), rng, lower, upper) / n
            log_step += (rate - params.target_acceptance) / (sweep + 1) ** 0.6
        step = math.exp(log_step)
        logger.debug(f"Adapted MCMC step for {model.tag} at N = {n}: {step:.4g}")

        accepted = 0
        for _ in range(params.thinning):
            accepted += SamplingService._sweep(model, points, step, rng, lower, upper)
        acceptance = accepted / (params.thinning * n)
        if accepted == 0:
            raise MixingError(f"Chain for {model.tag} at N = {n} accepted no moves (step {step:.3g})")

        ordered = np.sort(points)
        return Configuration(
            ordered,
            model_tag=model.tag,
            seed=seed,
            sampler=SamplerKind.MCMC,
            acceptance_rate=acceptance
        )

    @staticmethod
    def sample_invariant_mcmc(v: Potential,
                              f: Optional[Potential],
                              n: int,
                              params: McmcParams,
                              seed: int,
                              tag: str = "invariant") -> Configuration:
        return SamplingService.run_chain(InvariantModel(v, f, tag=tag), n, params, seed)

    @staticmethod
    def sample_repulsive_mcmc(q: Potential,
                              h: Interaction,
                              n: int,
                              params: McmcParams,
                              seed: int,
                              tag: str = "repulsive") -> Configuration:
        return SamplingService.run_chain(RepulsiveModel(q, h, tag=tag), n, params, seed)

    # =========================
    # Dispatch
    # =========================
    @staticmethod
    def resolve_sampler(model: EnsembleModel, sampler: Optional[SamplerKind]) -> SamplerKind:
        if sampler is None:
            return SamplerKind.TRIDIAGONAL if model.is_gaussian else SamplerKind.MCMC
        if sampler is SamplerKind.TRIDIAGONAL and not model.is_gaussian:
            raise DomainError(f"The tridiagonal sampler only covers V(t) = t^2; {model.tag} needs mcmc")
        return sampler

    @staticmethod
    def sample(model: EnsembleModel,
               n: int,
               seed: int,
               sampler: Optional[SamplerKind] = None,
               params: Optional[McmcParams] = None) -> Configuration:
        kind = SamplingService.resolve_sampler(model, sampler)
        if kind is SamplerKind.TRIDIAGONAL:
            return SamplingService.sample_gue(n, seed, tag=model.tag)
        if kind is SamplerKind.CUE:
            return SamplingService.sample_cue(n, seed, tag=model.tag)
        return SamplingService.run_chain(model, n, params or McmcParams(), seed)
