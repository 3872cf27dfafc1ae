"""
Sine-kernel objects: the kernel itself, its determinants, the gap
probability E(s) as a Fredholm determinant and the Gaudin CDF G = 1 + E'.
"""
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
from scipy import linalg, special

from ..errors import ComplexityError, DomainError, NumericalError
from ..models.gaudin_table import GaudinTable
from ..utils.quadrature import gauss_legendre, tensor_gauss

logger = logging.getLogger(__name__)

SERIES_POINTS = 12
SERIES_MAX_ORDER = 5
SERIES_MAX_S = 1.5
MONOTONE_CORRECTION_LIMIT = 1e-6


class GaudinService:
    """Reference law for bulk nearest-neighbor spacings."""

    @staticmethod
    def sine_kernel(d):
        """sin(pi d) / (pi d), with the series 1 - (pi d)^2 / 6 for |d| < 1e-8."""
        d = np.asarray(d, dtype=float)
        small = np.abs(d) < 1e-8
        x = math.pi * np.where(small, 1.0, d)
        value = np.where(small, 1.0 - (math.pi * d) ** 2 / 6.0, np.sin(x) / x)
        return value if value.ndim else float(value)

    @staticmethod
    def sine_matrix(points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return GaudinService.sine_kernel(pts[..., :, None] - pts[..., None, :])

    @staticmethod
    def sine_det(points: Sequence[float]) -> float:
        """det[S(t_i - t_j)] via pivoted LU."""
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        if pts.size < 1:
            raise DomainError("sine_det needs at least one point")
        return float(linalg.det(GaudinService.sine_matrix(pts)))

    @staticmethod
    def gap_probability(s: float, m: int = 40) -> float:
        """
        Probability of no point of the sine process in (0, s), as the
        Nystrom-discretized Fredholm determinant det(I - S) on L^2(0, s).
        """
        if s < 0:
            raise DomainError(f"gap probability needs s >= 0, got {s}")
        if m < 4:
            raise DomainError(f"quadrature order must be at least 4, got {m}")
        if s == 0:
            return 1.0
        x, w = gauss_legendre(m, 0.0, s)
        root = np.sqrt(w)
        a = root[:, None] * GaudinService.sine_matrix(x) * root[None, :]
        return float(linalg.det(np.eye(m) - a))

    @staticmethod
    def _derivative(e: np.ndarray, h: float) -> np.ndarray:
        """Five-point differences: centered inside, one-sided at the two nodes next to each end."""
        n = e.size
        d = np.empty(n)
        d[2:-2] = (e[:-4] - 8.0 * e[1:-3] + 8.0 * e[3:-1] - e[4:]) / (12.0 * h)
        for i in (0, 1):
            d[i] = (-25.0 * e[i] + 48.0 * e[i + 1] - 36.0 * e[i + 2] + 16.0 * e[i + 3] - 3.0 * e[i + 4]) / (12.0 * h)
        for i in (n - 2, n - 1):
            d[i] = (25.0 * e[i] - 48.0 * e[i - 1] + 36.0 * e[i - 2] - 16.0 * e[i - 3] + 3.0 * e[i - 4]) / (12.0 * h)
        return d

    @staticmethod
    def build_gaudin_table(s_max: float = 5.0,
                           step: float = 0.005,
                           m: int = 40,
                           threads: int = 1) -> GaudinTable:
        """
        Tabulate E and G = 1 + E' on the grid 0, step, ..., s_max.

        Raises:
            NumericalError: clamping and monotonizing G moved a value by more than 1e-6
        """
        if step <= 0 or s_max <= 0:
            raise DomainError("s_max and step must be positive")
        count = int(round(s_max / step))
        if count < 4:
            raise DomainError("Gaudin table needs at least five grid nodes")
        grid = step * np.arange(count + 1)

        workers = max(1, int(threads))
        if workers == 1:
            e = np.array([GaudinService.gap_probability(s, m) for s in grid])
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                e = np.array(list(pool.map(lambda s: GaudinService.gap_probability(s, m), grid)))

        raw = 1.0 + GaudinService._derivative(e, step)
        g = np.maximum.accumulate(np.clip(raw, 0.0, 1.0))
        correction = float(np.max(np.abs(g - raw)))
        if correction > MONOTONE_CORRECTION_LIMIT:
            raise NumericalError(
                f"Gaudin CDF needed a monotonicity correction of {correction:.3e}; "
                f"increase the quadrature order or refine the step"
            )
        logger.info(f"Gaudin table built: s_max = {grid[-1]}, step = {step}, m = {m}, correction {correction:.2e}")
        return GaudinTable(s_grid=grid, e_values=e, g_values=g, order=m, step=step)

    @staticmethod
    def load_or_build_table(s_max: float = 5.0,
                            step: float = 0.005,
                            m: int = 40,
                            cache_dir: Optional[str] = None,
                            threads: int = 1) -> GaudinTable:
        """Read the table from the cache directory when present, else build and store it."""
        from .persistence_service import PersistenceService

        if cache_dir:
            path = os.path.join(cache_dir, PersistenceService.gaudin_cache_name(s_max, step, m))
            if os.path.exists(path):
                table = PersistenceService.load_gaudin_table(path)
                logger.info(f"Gaudin table loaded from cache {path}")
                return table
        table = GaudinService.build_gaudin_table(s_max, step, m, threads)
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)
            PersistenceService.save_gaudin_table(table, path)
            logger.info(f"Gaudin table cached at {path}")
        return table

    @staticmethod
    def gaudin_eval(table: GaudinTable, s: float) -> float:
        return float(table.g_array(s))

    @staticmethod
    def gaudin_series_truncated(s: float, k_max: int) -> float:
        """
        Partial sum up to k_max of the inclusion-exclusion series for G(s),
        with the first point pinned at 0 and tensor Gauss-Legendre inner integrals.

        Raises:
            ComplexityError: k_max > 5
        """
        if k_max > SERIES_MAX_ORDER:
            raise ComplexityError(f"series order {k_max} exceeds {SERIES_MAX_ORDER}; cost grows as 12^k")
        if k_max < 2:
            raise DomainError("series order must be at least 2")
        if not 0.0 <= s <= SERIES_MAX_S:
            raise DomainError(f"series is only used for 0 <= s <= {SERIES_MAX_S}, got {s}")
        if s == 0:
            return 0.0

        total = 0.0
        for k in range(2, k_max + 1):
            z, w = tensor_gauss(SERIES_POINTS, k - 1, 0.0, s)
            pinned = np.column_stack((np.zeros(z.shape[0]), z))
            dets = np.linalg.det(GaudinService.sine_matrix(pinned))
            term = float(np.dot(w, dets)) / math.factorial(k - 1)
            total += (-1) ** k * term
        return total

    @staticmethod
    def wigner_surmise(s):
        """Normalized two-level surmise (32 / pi^2) s^2 exp(-4 s^2 / pi)."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError("Wigner surmise is defined for s >= 0")
        value = 32.0 / math.pi ** 2 * s * s * np.exp(-4.0 * s * s / math.pi)
        return value if value.ndim else float(value)

    @staticmethod
    def wigner_cdf(s):
        """erf(2 s / sqrt(pi)) - (4 s / pi) exp(-4 s^2 / pi), the integral of the surmise."""
        s = np.maximum(np.asarray(s, dtype=float), 0.0)
        value = special.erf(2.0 * s / math.sqrt(math.pi)) - 4.0 * s / math.pi * np.exp(-4.0 * s * s / math.pi)
        return value if value.ndim else float(value)
