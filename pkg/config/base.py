"""
Base configuration class with common settings
"""
import logging
import os
import tempfile

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _float(name, default):
    return float(os.getenv(name, default))


def _int(name, default):
    return int(os.getenv(name, default))


class Config:
    """Base configuration class - shared across all environments"""

    # ============================================
    # APPLICATION SETTINGS
    # ============================================
    APP_NAME = "spacing-lab"
    VERSION = "1.0.0"
    DEBUG = os.getenv("DEBUG", "False").lower() in ("true", "1", "yes")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    THREADS = _int("SPACING_LAB_THREADS", 1)
    OUTPUT_DIR = os.getenv("SPACING_LAB_OUTPUT_DIR", "reports")

    # ============================================
    # EQUILIBRIUM MEASURE
    # ============================================
    EQUILIBRIUM_NODES = _int("EQUILIBRIUM_NODES", 256)
    EQUILIBRIUM_TOL = _float("EQUILIBRIUM_TOL", 1e-10)
    MRS_THETA_POINTS = _int("MRS_THETA_POINTS", 128)
    MRS_MAX_ITER = _int("MRS_MAX_ITER", 100)
    DENSITY_QUAD_POINTS = _int("DENSITY_QUAD_POINTS", 64)

    # Repulsive systems
    FIXED_POINT_DAMPING = _float("FIXED_POINT_DAMPING", 0.5)
    FIXED_POINT_TOL = _float("FIXED_POINT_TOL", 1e-8)
    FIXED_POINT_MAX_ITER = _int("FIXED_POINT_MAX_ITER", 200)
    FIXED_POINT_DEGREE = _int("FIXED_POINT_DEGREE", 10)
    FIXED_POINT_QUAD_POINTS = _int("FIXED_POINT_QUAD_POINTS", 512)

    # ============================================
    # GAUDIN TABLE
    # ============================================
    GAUDIN_SMAX = _float("GAUDIN_SMAX", 5.0)
    GAUDIN_STEP = _float("GAUDIN_STEP", 0.005)
    GAUDIN_ORDER = _int("GAUDIN_ORDER", 40)
    GAUDIN_CACHE_DIR = os.getenv(
        "GAUDIN_CACHE_DIR",
        os.path.join(os.path.expanduser("~"), ".cache", "spacing-lab")
    )

    # ============================================
    # SAMPLING
    # ============================================
    MCMC_BURN_IN = _int("MCMC_BURN_IN", 2000)
    MCMC_THINNING = _int("MCMC_THINNING", 50)
    MCMC_INITIAL_STEP = float(os.getenv("MCMC_INITIAL_STEP")) if os.getenv("MCMC_INITIAL_STEP") else None
    MCMC_TARGET_ACCEPTANCE = _float("MCMC_TARGET_ACCEPTANCE", 0.23)

    # ============================================
    # KERNEL AND STUDIES
    # ============================================
    STIELTJES_QUAD_POINTS = _int("STIELTJES_QUAD_POINTS", 4096)
    KERNEL_MAX_N = 128
    INTENSITY_MIN_REPLICAS = _int("INTENSITY_MIN_REPLICAS", 50)
    RATE_FIT_MIN_R2 = _float("RATE_FIT_MIN_R2", 0.8)

    def __init__(self):
        """Initialize configuration and validate settings"""
        self.validate()

    def validate(self):
        """Log settings that are out of range; never raises"""
        problems = []
        if not 0 < self.FIXED_POINT_DAMPING <= 1:
            problems.append(f"FIXED_POINT_DAMPING = {self.FIXED_POINT_DAMPING} outside (0, 1]")
        if not 0 < self.MCMC_TARGET_ACCEPTANCE < 1:
            problems.append(f"MCMC_TARGET_ACCEPTANCE = {self.MCMC_TARGET_ACCEPTANCE} outside (0, 1)")
        if self.THREADS < 1:
            problems.append(f"THREADS = {self.THREADS} must be at least 1")
        if self.GAUDIN_CACHE_DIR:
            parent = self.GAUDIN_CACHE_DIR
            while parent and not os.path.exists(parent):
                parent = os.path.dirname(parent)
            if parent and not os.access(parent, os.W_OK):
                problems.append(f"GAUDIN_CACHE_DIR {self.GAUDIN_CACHE_DIR} is not writable")

        for problem in problems:
            logger.warning(f"Configuration: {problem}")
        return problems

    @staticmethod
    def temporary_cache_dir():
        return os.path.join(tempfile.gettempdir(), "spacing-lab-test-cache")
