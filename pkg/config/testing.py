"""
Testing configuration - quiet logging, throwaway cache, single thread
"""
from .base import Config


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEBUG = True
    LOG_LEVEL = "WARNING"
    THREADS = 1

    # ============================================
    # TESTING CACHE - TEMPORARY DIRECTORY
    # ============================================
    GAUDIN_CACHE_DIR = Config.temporary_cache_dir()

    # Short chains keep the sampler tests fast
    MCMC_BURN_IN = 200
    MCMC_THINNING = 10
