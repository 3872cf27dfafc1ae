"""
Production configuration - long study runs on all cores
"""
import os

from .base import Config


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Use every core unless told otherwise
    THREADS = int(os.getenv("SPACING_LAB_THREADS", os.cpu_count() or 1))
