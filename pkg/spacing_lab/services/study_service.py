import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..errors import DomainError, NoSpacingsError
from ..models.configuration import SamplerKind
from ..models.gaudin_table import GaudinTable
from ..models.measure import EquilibriumMeasure
from ..models.spacing import IntervalSpec, Normalization
from ..models.study import IntensityRow, RateFit, StudyConfig, StudyRow
from ..utils.seeding import derive_seed, replica_key
from .equilibrium_service import EquilibriumService
from .gaudin_service import GaudinService
from .persistence_service import PersistenceService
from .sampling_service import SamplingService
from .spacing_service import SpacingService

logger = logging.getLogger(__name__)

# Constants
MIN_RATE_POINTS = 3
DEFAULT_MIN_R2 = 0.8
DEFAULT_MIN_INTENSITY_REPLICAS = 50


@dataclass(frozen=True)
class ReplicaResult:
    """Observables of one replica for one interval."""
    seed: int
    spacings: np.ndarray
    length: float
    hat_distance: Optional[float]
    per_length_distance: Optional[float]
    mass_deviation: Optional[float]

    @property
    def empty(self) -> bool:
        return self.spacings.size == 0


def _mean_and_error(values: Sequence[float]) -> Tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


class StudyService:
    """Monte Carlo drivers for spacing convergence, rate and intensity studies."""

    @staticmethod
    def study_measure(config: StudyConfig, settings=None) -> Optional[EquilibriumMeasure]:
        """Measure used for unfolding and localized windows; None on the circle."""
        if config.sampler is SamplerKind.CUE:
            return None
        return EquilibriumService.measure_for(config.model, settings)

    @staticmethod
    def _map(task: Callable, items: Sequence, threads: int) -> List:
        """Ordered map; results come back in item order whatever the thread count."""
        if threads <= 1:
            return [task(item) for item in items]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(task, items))

    @staticmethod
    def run_replica(config: StudyConfig,
                    n: int,
                    interval_index: int,
                    spec: IntervalSpec,
                    replica: int,
                    measure: Optional[EquilibriumMeasure],
                    table: GaudinTable) -> ReplicaResult:
        seed = derive_seed(config.base_seed, *replica_key(n, interval_index, replica))
        try:
            x = SamplingService.sample(config.model, n, seed, config.sampler, config.mcmc)
            spacings, length = SpacingService.observe(x, spec, measure)
            if spacings.size == 0:
                return ReplicaResult(seed, spacings, length, None, None, None)
            hat = SpacingService.empirical_spacing_cdf(spacings)
            per_length = SpacingService.per_length_cdf(spacings, length)
            return ReplicaResult(
                seed=seed,
                spacings=spacings,
                length=length,
                hat_distance=SpacingService.kolmogorov_distance(hat, table),
                per_length_distance=SpacingService.kolmogorov_distance(per_length, table),
                mass_deviation=SpacingService.total_mass_deviation(per_length)
            )
        except Exception:
            logger.error(f"Replica {replica} failed (N = {n}, interval {spec.label}, seed {seed})", exc_info=True)
            raise

    @staticmethod
    def _replicas(config, n, interval_index, spec, measure, table, threads) -> List[ReplicaResult]:
        def task(replica):
            return StudyService.run_replica(config, n, interval_index, spec, replica, measure, table)

        results = StudyService._map(task, range(config.replicas), threads)
        empty = sum(1 for r in results if r.empty)
        if empty:
            logger.warning(f"{empty} of {config.replicas} replicas had no spacings (N = {n}, interval {spec.label})")
        return results

    # =========================
    # Convergence
    # =========================
    @staticmethod
    def run_convergence_study(config: StudyConfig,
                              table: GaudinTable,
                              threads: int = 1,
                              measure: Optional[EquilibriumMeasure] = None) -> List[StudyRow]:
        """
        Mean Kolmogorov distance to G over R replicas for every (N, interval),
        once per normalization.
        """
        if measure is None:
            measure = StudyService.study_measure(config)
        rows = []
        for n in config.sizes:
            for index, spec in enumerate(config.intervals_for(n)):
                results = StudyService._replicas(config, n, index, spec, measure, table, threads)
                full = [r for r in results if not r.empty]
                length = results[0].length
                for normalization in Normalization:
                    if normalization is Normalization.HAT:
                        distances = [r.hat_distance for r in full]
                        deviations = [0.0 for _ in full]
                    else:
                        distances = [r.per_length_distance for r in full]
                        deviations = [r.mass_deviation for r in full]
                    mean, error = _mean_and_error(distances)
                    mass_mean, _ = _mean_and_error(deviations)
                    rows.append(StudyRow(
                        model_tag=config.model.tag,
                        n=n,
                        interval=spec.label,
                        length=length,
                        replicas=config.replicas,
                        normalization=normalization,
                        mean_distance=mean,
                        std_error=error,
                        mean_mass_deviation=mass_mean,
                        empty_replicas=len(results) - len(full),
                        seed=config.base_seed
                    ))
                logger.info(f"Convergence row done: N = {n}, interval {spec.label}, |I| = {length:.4g}, "
                            f"mean distance {rows[-2].mean_distance:.4f} +/- {rows[-2].std_error:.4f}")
        return rows

    # =========================
    # Rates
    # =========================
    @staticmethod
    def fit_rate(points: Sequence[Tuple[float, float]], min_r_squared: float = DEFAULT_MIN_R2) -> RateFit:
        """
        Least-squares line through (log |I|, log distance).

        Raises:
            DomainError: fewer than 3 points or a non-positive coordinate
        """
        if len(points) < MIN_RATE_POINTS:
            raise DomainError(f"a rate fit needs at least {MIN_RATE_POINTS} points, got {len(points)}")
        arr = np.asarray(points, dtype=float)
        if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
            raise DomainError("rate fit needs positive, finite sizes and distances")
        logs = np.log(arr)
        result = stats.linregress(logs[:, 0], logs[:, 1])
        r_squared = float(min(max(result.rvalue ** 2, 0.0), 1.0))
        fit = RateFit(
            points=tuple((float(x), float(y)) for x, y in logs),
            slope=float(result.slope),
            intercept=float(result.intercept),
            r_squared=r_squared,
            min_r_squared=min_r_squared
        )
        if not fit.conclusive:
            logger.warning(f"Rate fit inconclusive: r^2 = {r_squared:.3f} below {min_r_squared}")
        return fit

    @staticmethod
    def run_rate_study(config: StudyConfig,
                       table: GaudinTable,
                       threads: int = 1,
                       min_r_squared: float = DEFAULT_MIN_R2,
                       measure: Optional[EquilibriumMeasure] = None) -> Tuple[List[StudyRow], Dict[int, RateFit]]:
        """Convergence rows plus, for every N, a fit of the normalized distance against |I|."""
        rows = StudyService.run_convergence_study(config, table, threads, measure)
        fits = {}
        for n in config.sizes:
            points = [(row.length, row.mean_distance) for row in rows
                      if row.n == n and row.normalization is Normalization.HAT and math.isfinite(row.mean_distance)]
            fits[n] = StudyService.fit_rate(points, min_r_squared)
            logger.info(f"Rate fit at N = {n}: slope {fits[n].slope:.3f}, r^2 {fits[n].r_squared:.3f}")
        return rows, fits

    # =========================
    # Intensity
    # =========================
    @staticmethod
    def run_intensity_study(config: StudyConfig,
                            table: GaudinTable,
                            threads: int = 1,
                            min_replicas: int = DEFAULT_MIN_INTENSITY_REPLICAS,
                            measure: Optional[EquilibriumMeasure] = None) -> List[IntensityRow]:
        """
        Distance of the replica-pooled spacing intensity to G, next to the
        mean and median single-replica distance.
        """
        if config.replicas < min_replicas:
            raise DomainError(f"intensity studies need at least {min_replicas} replicas, got {config.replicas}")
        if measure is None:
            measure = StudyService.study_measure(config)
        rows = []
        for n in config.sizes:
            for index, spec in enumerate(config.intervals_for(n)):
                results = StudyService._replicas(config, n, index, spec, measure, table, threads)
                length = results[0].length
                try:
                    pooled = SpacingService.intensity_cdf([r.spacings for r in results], length)
                except NoSpacingsError:
                    logger.warning(f"No spacings in any replica (N = {n}, interval {spec.label}); row skipped")
                    continue
                singles = [r.hat_distance for r in results if not r.empty]
                rows.append(IntensityRow(
                    model_tag=config.model.tag,
                    n=n,
                    interval=spec.label,
                    length=length,
                    replicas=config.replicas,
                    pooled_distance=SpacingService.kolmogorov_distance(pooled, table),
                    single_mean=float(np.mean(singles)),
                    single_median=float(np.median(singles)),
                    intensity_mass=pooled.total_mass,
                    seed=config.base_seed
                ))
                logger.info(f"Intensity row done: N = {n}, interval {spec.label}, "
                            f"pooled {rows[-1].pooled_distance:.4f} vs median single {rows[-1].single_median:.4f}")
        return rows

    # =========================
    # Reports
    # =========================
    @staticmethod
    def write_convergence_report(rows: Sequence[StudyRow], config: StudyConfig, path: str) -> List[str]:
        """CSV report plus one gnuplot .dat file per normalization; returns the written paths."""
        PersistenceService.save_report(path, "convergence-report", StudyRow.HEADER,
                                       (row.values() for row in rows),
                                       model_tag=config.model.tag, seed=config.base_seed, replicas=config.replicas)
        written = [path]
        stem = os.path.splitext(path)[0]
        for normalization in Normalization:
            dat = f"{stem}-{normalization.value}.dat"
            PersistenceService.save_dat(
                dat,
                ((row.length, row.mean_distance, row.std_error) for row in rows if row.normalization is normalization),
                comment=f"{config.model.tag} {normalization.value}: |I| mean_distance std_error"
            )
            written.append(dat)
        return written

    @staticmethod
    def write_rate_report(fits: Dict[int, RateFit], config: StudyConfig, path: str) -> None:
        PersistenceService.save_report(
            path, "rate-fit", ("N",) + tuple(RateFit.header()),
            ((n,) + tuple(fit.as_dict().values()) for n, fit in sorted(fits.items())),
            model_tag=config.model.tag, seed=config.base_seed
        )

    @staticmethod
    def write_intensity_report(rows: Sequence[IntensityRow], config: StudyConfig, path: str) -> List[str]:
        PersistenceService.save_report(path, "intensity-report", IntensityRow.HEADER,
                                       (row.values() for row in rows),
                                       model_tag=config.model.tag, seed=config.base_seed, replicas=config.replicas)
        dat = f"{os.path.splitext(path)[0]}.dat"
        PersistenceService.save_dat(
            dat,
            ((row.length, row.pooled_distance, 0.0) for row in rows),
            comment=f"{config.model.tag} pooled intensity: |I| distance 0"
        )
        return [path, dat]

    @staticmethod
    def study_table(config: StudyConfig, cache_dir: Optional[str], threads: int = 1) -> GaudinTable:
        return GaudinService.load_or_build_table(
            config.gaudin.s_max, config.gaudin.step, config.gaudin.order, cache_dir, threads
        )
