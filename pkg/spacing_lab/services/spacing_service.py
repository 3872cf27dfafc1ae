import itertools
import logging
import math
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ComplexityError, DomainError, NoSpacingsError
from ..models.configuration import Configuration, SamplerKind
from ..models.gaudin_table import GaudinTable
from ..models.measure import EquilibriumMeasure
from ..models.spacing import EmpiricalCDF, IntervalMode, IntervalSpec, Normalization
from .equilibrium_service import EquilibriumService
from .gaudin_service import GaudinService
from .sampling_service import SamplingService

logger = logging.getLogger(__name__)

# Constants
MAX_GAMMA_ORDER = 8
BRUTE_FORCE_MAX_POINTS = 30
MIN_LOCAL_DENSITY = 1e-6

Interval = Tuple[float, float]


class SpacingService:
    """Nearest-neighbor spacing observables and their distance to the Gaudin law."""

    # =========================
    # Intervals and spacings
    # =========================
    @staticmethod
    def select_interval(spec: IntervalSpec, n: int, m: Optional[EquilibriumMeasure] = None) -> Interval:
        """
        Unfolded window for quantile/full specs, physical window for localized ones.

        Raises:
            DomainError: localized window centered where the density (nearly) vanishes
        """
        if spec.mode is IntervalMode.FULL:
            return 0.0, float(n)
        if spec.mode is IntervalMode.QUANTILE_WINDOW:
            return spec.lower * n, spec.upper * n
        if m is None:
            raise DomainError("A localized window needs the equilibrium measure")
        mu_a = float(m.density_array(spec.center))
        if mu_a <= MIN_LOCAL_DENSITY:
            raise DomainError(f"Density at a = {spec.center} is {mu_a:.3g}; localized scaling needs mu(a) > 0")
        return spec.center - spec.half_length, spec.center + spec.half_length

    @staticmethod
    def spacing_multiset(interval: Interval, y) -> np.ndarray:
        """Gaps y_{j+1} - y_j with both neighbors in the closed interval."""
        pts = np.asarray(y, dtype=float)
        if pts.size < 2:
            return np.empty(0)
        lo, hi = interval
        inside = (pts >= lo) & (pts <= hi)
        return np.diff(pts)[inside[:-1] & inside[1:]]

    @staticmethod
    def empirical_spacing_cdf(spacings) -> EmpiricalCDF:
        values = np.asarray(spacings, dtype=float)
        if values.size == 0:
            raise NoSpacingsError("No spacings in the interval")
        return EmpiricalCDF(values, denominator=float(values.size), normalization=Normalization.HAT)

    @staticmethod
    def per_length_cdf(spacings, length: float) -> EmpiricalCDF:
        """Spacing measure divided by |I| instead of by the number of spacings."""
        values = np.asarray(spacings, dtype=float)
        if values.size == 0:
            raise NoSpacingsError("No spacings in the interval")
        return EmpiricalCDF(values, denominator=float(length), normalization=Normalization.PER_LENGTH)

    @staticmethod
    def localized_rescale(x: Configuration, a: float, mu_a: float, half_length: float) -> np.ndarray:
        """N mu(a) x_j for the x_j in the physical window [a - t, a + t]."""
        if mu_a <= 0:
            raise DomainError("localized scaling needs mu(a) > 0")
        pts = x.points
        inside = (pts >= a - half_length) & (pts <= a + half_length)
        return x.n * mu_a * pts[inside]

    # =========================
    # k-point tuple measures
    # =========================
    @staticmethod
    def _gamma_count(interval: Interval, y: np.ndarray, k: int, s: float) -> int:
        """
        Number of k-subsets with both extremes in I and spread <= s.

        For a left extreme i whose admissible right extremes are i+1..L, the
        interior choices sum to C(L - i, k - 1).
        """
        lo, hi = interval
        pts = np.asarray(y, dtype=float)
        inside = np.flatnonzero((pts >= lo) & (pts <= hi))
        if inside.size < 2:
            return 0
        window = pts[inside]
        reach = np.searchsorted(window, np.minimum(window + s, hi), side='right') - 1
        # inside indices are contiguous in the sorted sample, so window positions are sample positions
        return sum(math.comb(int(last - first), k - 1) for first, last in enumerate(reach) if last > first)

    @staticmethod
    def gamma_k_mass(interval: Interval, y, k: int, s: float) -> float:
        """
        (1/|I|) times the number of k-tuples with extremes in I and spread at most s.

        Raises:
            ComplexityError: k > 8
        """
        if k > MAX_GAMMA_ORDER:
            raise ComplexityError(f"gamma^k is limited to k <= {MAX_GAMMA_ORDER}, got {k}")
        if k < 2:
            raise DomainError("gamma^k needs k >= 2")
        lo, hi = interval
        return SpacingService._gamma_count(interval, y, k, s) / (hi - lo)

    @staticmethod
    def gamma_k_mass_bruteforce(interval: Interval, y, k: int, s: float) -> float:
        """Direct enumeration of all k-subsets; only for small samples."""
        pts = np.sort(np.asarray(y, dtype=float))
        if pts.size > BRUTE_FORCE_MAX_POINTS:
            raise ComplexityError(f"brute force is limited to {BRUTE_FORCE_MAX_POINTS} points")
        lo, hi = interval
        count = 0
        for tup in itertools.combinations(pts, k):
            if lo <= tup[0] <= hi and lo <= tup[-1] <= hi and tup[-1] - tup[0] <= s:
                count += 1
        return count / (hi - lo)

    @staticmethod
    def alternating_gamma_sum(interval: Interval, y, s: float, m: Optional[int] = None) -> float:
        """
        sum_{k=2}^{m} (-1)^k gamma^k([0, s]); m defaults to the sample size,
        where the sum equals sigma([0, s]) / |I| exactly.
        """
        pts = np.asarray(y, dtype=float)
        top = pts.size if m is None else m
        lo, hi = interval
        total = sum((-1) ** k * SpacingService._gamma_count(interval, pts, k, s) for k in range(2, top + 1))
        return total / (hi - lo)

    # =========================
    # Distances
    # =========================
    @staticmethod
    def kolmogorov_distance(e: EmpiricalCDF, g: GaudinTable) -> float:
        """
        sup_s |ECDF(s) - G(s)| from both one-sided limits at every jump, the
        table nodes and the limit s -> infinity.
        """
        jumps = e.jumps
        g_jumps = g.g_array(jumps)
        candidates = [
            np.max(np.abs(e.left_limit(jumps) - g_jumps)),
            np.max(np.abs(e(jumps) - g_jumps)),
            np.max(np.abs(e(g.s_grid) - g.g_values)),
            abs(e.total_mass - 1.0),
        ]
        return float(max(candidates))

    @staticmethod
    def wigner_distance(e: EmpiricalCDF) -> float:
        jumps = e.jumps
        w = GaudinService.wigner_cdf(jumps)
        return float(max(
            np.max(np.abs(e.left_limit(jumps) - w)),
            np.max(np.abs(e(jumps) - w)),
            abs(e.total_mass - 1.0),
        ))

    @staticmethod
    def discretized_distance(e: EmpiricalCDF, g: GaudinTable, m: int) -> Tuple[float, float]:
        """
        Largest deviation at the M - 1 quantile nodes of G, and the bound
        1/M + delta_M + |mass - 1| on the full Kolmogorov distance.
        """
        if m < 2:
            raise DomainError("discretization needs M >= 2")
        levels = np.arange(1, m) / m
        nodes = np.interp(levels, g.g_values, g.s_grid)
        delta = float(np.max(np.abs(e(nodes) - g.g_array(nodes))))
        return delta, 1.0 / m + delta + SpacingService.total_mass_deviation(e)

    @staticmethod
    def total_mass_deviation(e: EmpiricalCDF) -> float:
        return abs(e.total_mass - 1.0)

    # =========================
    # Pooling and per-replica observables
    # =========================
    @staticmethod
    def intensity_cdf(replicas: Sequence[Union[EmpiricalCDF, Iterable[float]]], length: float) -> EmpiricalCDF:
        """
        Pooled spacings of R replicas normalized by R |I|, the Monte Carlo
        estimate of the expected spacing measure per unit length.

        Raises:
            NoSpacingsError: every replica is empty
        """
        if not replicas:
            raise DomainError("intensity_cdf needs at least one replica")
        pooled = [np.asarray(r.jumps if isinstance(r, EmpiricalCDF) else list(r), dtype=float) for r in replicas]
        values = np.concatenate(pooled)
        if values.size == 0:
            raise NoSpacingsError(f"None of the {len(replicas)} replicas has spacings in the interval")
        return EmpiricalCDF(values, denominator=len(replicas) * float(length),
                            normalization=Normalization.PER_LENGTH)

    @staticmethod
    def observe(x: Configuration,
                spec: IntervalSpec,
                m: Optional[EquilibriumMeasure]) -> Tuple[np.ndarray, float]:
        """
        Spacings of one configuration for an interval spec, with the length |I|
        used by the per-length normalization.
        """
        if spec.mode is IntervalMode.LOCALIZED:
            lo, hi = SpacingService.select_interval(spec, x.n, m)
            mu_a = float(m.density_array(spec.center))
            y = SpacingService.localized_rescale(x, spec.center, mu_a, spec.half_length)
            return np.diff(y), 2.0 * spec.half_length * x.n * mu_a

        if x.unfolded:
            unfolded = x
        elif x.sampler is SamplerKind.CUE:
            unfolded = SamplingService.unfold_cue(x)
        else:
            if m is None:
                raise DomainError("Unfolding needs the equilibrium measure")
            unfolded = EquilibriumService.unfold(m, x)
        lo, hi = SpacingService.select_interval(spec, x.n, m)
        return SpacingService.spacing_multiset((lo, hi), unfolded.points), hi - lo
